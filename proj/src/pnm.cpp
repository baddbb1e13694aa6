#include "gazenet/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "gazenet/error.hpp"

namespace gazenet {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos])) && buf[pos] != '#')
    ++pos;
  return buf.substr(start, pos - start);
}

std::size_t header_number(const std::string& buf, std::size_t& pos, const std::string& path) {
  const std::string tok = header_token(buf, pos);
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw IoError(path + ": malformed PNM header");
  return std::stoul(tok);
}

}  // namespace

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path.string());
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = path.string();

  std::size_t pos = 0;
  const std::string magic = header_token(buf, pos);
  std::size_t channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw IoError(name + ": unsupported image format (only binary PGM P5 / PPM P6)");

  const std::size_t width = header_number(buf, pos, name);
  const std::size_t height = header_number(buf, pos, name);
  const std::size_t maxval = header_number(buf, pos, name);
  if (width == 0 || height == 0) throw IoError(name + ": zero image dimension");
  if (maxval == 0 || maxval > 255) throw IoError(name + ": only 8-bit PNM (maxval <= 255) is supported");
  if (pos >= buf.size() || !std::isspace(static_cast<unsigned char>(buf[pos])))
    throw IoError(name + ": malformed PNM header");
  ++pos;  // single whitespace before the raster

  const std::size_t n = width * height * channels;
  if (buf.size() - pos < n) throw IoError(name + ": truncated pixel data");
  Image img(width, height, channels);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<std::uint8_t>(buf[pos + i]);
    img.pixels[i] = maxval == 255 ? v : static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  }
  return img;
}

void write_pnm(const Image& img, const std::filesystem::path& path) {
  if (img.channels != 1 && img.channels != 3)
    throw ValidationError("write_pnm: only 1 or 3 channel images");
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open image for writing: " + path.string());
  out << (img.channels == 1 ? "P5" : "P6") << '\n'
      << img.width << ' ' << img.height << '\n'
      << 255 << '\n';
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IoError("failed writing image: " + path.string());
}

}  // namespace gazenet
