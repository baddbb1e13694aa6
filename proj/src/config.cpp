#include "gazenet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gazenet/error.hpp"
#include "gazenet/report.hpp"

namespace gazenet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string key_name(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "] " + std::string(key);
}

double to_real(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(!v.empty() && ec == std::errc() && ptr == v.data() + v.size() && std::isfinite(out),
          key_name(section, key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

std::uint64_t to_uint(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(!v.empty() && ec == std::errc() && ptr == v.data() + v.size(),
          key_name(section, key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

std::vector<double> to_list(std::string_view section, std::string_view key, std::string_view v) {
  std::vector<double> out;
  v = trim(v);
  if (v.empty()) return out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(to_real(section, key, v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string real_str(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string list_str(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + real_str(v[i]);
  return out;
}

const char* target_name(ThreeTarget t) {
  switch (t) {
    case ThreeTarget::Left: return "Left";
    case ThreeTarget::Center: return "Center";
    case ThreeTarget::Right: return "Right";
    case ThreeTarget::Excluded: return "Excluded";
  }
  return "?";
}

}  // namespace

PatchGeometry RunConfig::geometry() const {
  PatchGeometry g;
  g.mode = mode;
  g.patch_h = mode == PathMode::Roi ? roi_patch_h : ert_patch_h;
  g.patch_w = mode == PathMode::Roi ? roi_patch_w : ert_patch_w;
  g.roi = roi;
  g.margins = margins;
  return g;
}

std::filesystem::path RunConfig::resolved_image_root() const {
  if (!image_root.empty()) return image_root;
  return manifest.has_parent_path() ? manifest.parent_path() : std::filesystem::path(".");
}

void RunConfig::validate() const {
  require(classes == 3 || classes == 7, "[data] classes must be 3 or 7");
  for (auto d : {roi_patch_h, roi_patch_w, ert_patch_h, ert_patch_w})
    require(d >= 8, "[data] patch dimensions must be at least 8 (three 2x2 pooling stages)");
  require(roi.w > 0 && roi.h > 0, "[data] roi_w and roi_h must be positive");
  require(margins.width > 0 && margins.height > 0, "[data] ert margins must be positive");
  require(lr >= 0.0, "[train] lr must be non-negative");
  require(batch_size >= 1, "[train] batch_size must be at least 1");
  augment.validate();
  map3.validate();
}

void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value) {
  section = trim(section);
  key = trim(key);
  value = trim(value);
  const auto unknown = [&]() { fail("unknown config key " + key_name(section, key)); };
  const auto real = [&]() { return to_real(section, key, value); };
  const auto uint = [&]() { return static_cast<std::size_t>(to_uint(section, key, value)); };

  if (section == "data") {
    if (key == "manifest") cfg.manifest = std::string(value);
    else if (key == "image_root") cfg.image_root = std::string(value);
    else if (key == "mode") {
      const auto v = lower(value);
      require(v == "roi" || v == "ert", "[data] mode must be roi or ert, got '" + std::string(value) + "'");
      cfg.mode = v == "roi" ? PathMode::Roi : PathMode::Ert;
    } else if (key == "classes") {
      cfg.classes = uint();
      require(cfg.classes == 3 || cfg.classes == 7, "[data] classes must be 3 or 7");
    } else if (key == "roi_patch_h") cfg.roi_patch_h = uint();
    else if (key == "roi_patch_w") cfg.roi_patch_w = uint();
    else if (key == "ert_patch_h") cfg.ert_patch_h = uint();
    else if (key == "ert_patch_w") cfg.ert_patch_w = uint();
    else if (key == "split") {
      const auto v = lower(value);
      require(v == "image" || v == "subject", "[data] split must be image or subject");
      cfg.split = v == "image" ? SplitMode::Image : SplitMode::Subject;
    } else if (key == "roi_left_x") cfg.roi.left_x = real();
    else if (key == "roi_right_x") cfg.roi.right_x = real();
    else if (key == "roi_y") cfg.roi.y = real();
    else if (key == "roi_w") cfg.roi.w = real();
    else if (key == "roi_h") cfg.roi.h = real();
    else if (key == "ert_width") cfg.margins.width = real();
    else if (key == "ert_height") cfg.margins.height = real();
    else unknown();
  } else if (section == "train") {
    if (key == "lr") cfg.lr = real();
    else if (key == "batch_size") cfg.batch_size = uint();
    else if (key == "epochs") cfg.epochs = uint();
    else if (key == "seed") cfg.seed = to_uint(section, key, value);
    else if (key == "model_left") cfg.model_left = std::string(value);
    else if (key == "model_right") cfg.model_right = std::string(value);
    else if (key == "log") cfg.train_log = std::string(value);
    else if (key == "report_dir") cfg.report_dir = std::string(value);
    else unknown();
  } else if (section == "augment") {
    if (key == "rotations") cfg.augment.rotation_degrees = to_list(section, key, value);
    else if (key == "blur_sigmas") cfg.augment.blur_sigmas = to_list(section, key, value);
    else if (key == "scales") cfg.augment.scale_factors = to_list(section, key, value);
    else unknown();
  } else if (section == "map3") {
    const auto eac = parse_eac(key);
    if (!eac) unknown();
    const auto v = lower(value);
    ThreeTarget t{};
    if (v == "left") t = ThreeTarget::Left;
    else if (v == "center") t = ThreeTarget::Center;
    else if (v == "right") t = ThreeTarget::Right;
    else if (v == "excluded") t = ThreeTarget::Excluded;
    else fail(key_name(section, key) + ": expected Left, Center, Right or Excluded");
    cfg.map3.targets[static_cast<std::size_t>(*eac)] = t;
  } else {
    fail("unknown config section [" + std::string(section) + "]");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      require(line.back() == ']', "config line " + std::to_string(line_no) + ": malformed section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      require(section == "data" || section == "train" || section == "augment" || section == "map3",
              "config line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string_view::npos,
            "config line " + std::to_string(line_no) + ": expected key = value");
    require(!section.empty(), "config line " + std::to_string(line_no) + ": key outside a section");
    try {
      apply_setting(base, section, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  const std::string text = read_text_file(path);
  try {
    return parse_config(text, std::move(base));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[data]\n"
     << "manifest = " << c.manifest.string() << '\n'
     << "image_root = " << c.image_root.string() << '\n'
     << "mode = " << path_mode_name(c.mode) << '\n'
     << "classes = " << c.classes << '\n'
     << "roi_patch_h = " << c.roi_patch_h << '\n'
     << "roi_patch_w = " << c.roi_patch_w << '\n'
     << "ert_patch_h = " << c.ert_patch_h << '\n'
     << "ert_patch_w = " << c.ert_patch_w << '\n'
     << "split = " << (c.split == SplitMode::Image ? "image" : "subject") << '\n'
     << "roi_left_x = " << real_str(c.roi.left_x) << '\n'
     << "roi_right_x = " << real_str(c.roi.right_x) << '\n'
     << "roi_y = " << real_str(c.roi.y) << '\n'
     << "roi_w = " << real_str(c.roi.w) << '\n'
     << "roi_h = " << real_str(c.roi.h) << '\n'
     << "ert_width = " << real_str(c.margins.width) << '\n'
     << "ert_height = " << real_str(c.margins.height) << '\n'
     << "\n[train]\n"
     << "lr = " << real_str(c.lr) << '\n'
     << "batch_size = " << c.batch_size << '\n'
     << "epochs = " << c.epochs << '\n'
     << "seed = " << c.seed << '\n'
     << "model_left = " << c.model_left.string() << '\n'
     << "model_right = " << c.model_right.string() << '\n'
     << "log = " << c.train_log.string() << '\n'
     << "report_dir = " << c.report_dir.string() << '\n'
     << "\n[augment]\n"
     << "rotations = " << list_str(c.augment.rotation_degrees) << '\n'
     << "blur_sigmas = " << list_str(c.augment.blur_sigmas) << '\n'
     << "scales = " << list_str(c.augment.scale_factors) << '\n'
     << "\n[map3]\n";
  for (std::size_t i = 0; i < kEacCount; ++i) {
    const auto& t = c.map3.targets[i];
    os << eac_name(static_cast<EacClass>(i)) << " = " << (t ? target_name(*t) : "") << '\n';
  }
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : format_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gazenet
