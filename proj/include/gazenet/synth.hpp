#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gazenet/dataset.hpp"

namespace gazenet {

// Iris displacement for each class as a fraction of the eye width (x) and
// eye-opening height (y), image coordinates (y down):
//   VD ( 0, 0)  VR (-1,-1)  VC (+1,-1)  AR (-1, 0)  AC (+1, 0)  ID (-1,+1)  K (+1,+1)
// scaled by kIrisShiftX / kIrisShiftY.
Point iris_offset(EacClass c);
inline constexpr double kIrisShiftX = 0.24;
inline constexpr double kIrisShiftY = 0.28;

struct SynthItem {
  Image image;
  Sample sample;
};

// n_per_class grayscale faces per class, class-major order. Face boxes and
// eye corners are exact.
std::vector<SynthItem> generate_synthetic(std::size_t n_per_class, std::uint64_t seed);

// Writes <out_dir>/img_XXXX.pgm and <out_dir>/manifest.csv. Returns the
// manifest path.
std::filesystem::path write_synthetic(const std::filesystem::path& out_dir,
                                      std::size_t n_per_class, std::uint64_t seed);

}  // namespace gazenet
