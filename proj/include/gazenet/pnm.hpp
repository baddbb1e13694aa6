#pragma once

#include <filesystem>

#include "gazenet/image.hpp"

namespace gazenet {

// Binary PGM (P5) and PPM (P6) with maxval <= 255. Throws IoError.
Image read_pnm(const std::filesystem::path& path);
// P5 for one channel, P6 for three.
void write_pnm(const Image& img, const std::filesystem::path& path);

}  // namespace gazenet
