#pragma once

#include <optional>
#include <utility>

#include "gazenet/image.hpp"
#include "gazenet/tensor.hpp"

namespace gazenet {

enum class EyeSide { Left, Right };  // side of the image, not of the subject
enum class PathMode { Roi, Ert };

const char* eye_side_name(EyeSide side);
const char* path_mode_name(PathMode mode);

// Eye corners. "left" is the eye on the image's left side.
struct EyeLandmarks {
  Point left_outer;
  Point left_inner;
  Point right_inner;
  Point right_outer;

  bool operator==(const EyeLandmarks&) const = default;
};

// Eye boxes as fractions of the face box.
struct RoiFractions {
  double left_x = 0.12;
  double right_x = 0.56;
  double y = 0.22;
  double w = 0.32;
  double h = 0.26;
};

// Landmark crop extents as multiples of the corner distance.
struct LandmarkMargins {
  double width = 1.5;
  double height = 0.9;
};

struct PatchGeometry {
  PathMode mode = PathMode::Roi;
  std::size_t patch_h = 42;
  std::size_t patch_w = 50;
  RoiFractions roi;
  LandmarkMargins margins;

  static PatchGeometry roi_default() { return {PathMode::Roi, 42, 50, {}, {}}; }
  static PatchGeometry ert_default() { return {PathMode::Ert, 15, 25, {}, {}}; }
};

// gray = round(0.299 R + 0.587 G + 0.114 B). Single-channel input is returned
// unchanged.
Image to_grayscale(const Image& img);

// Half-pixel-centre bilinear resampling with edge clamping. Single channel.
// Integer rasters are rounded to nearest.
template <typename Pixel>
Raster<Pixel> resize_bilinear(const Raster<Pixel>& img, std::size_t out_w, std::size_t out_h);

std::pair<Box, Box> geometric_eye_rois(const Box& face, const RoiFractions& f = {});

// Axis-aligned box centred on the corner midpoint.
Box landmark_eye_crop(Point inner, Point outer, const LandmarkMargins& m = {});

// Clamps the box to the image; throws if nothing remains.
Image crop(const Image& img, const Box& box);

// v / 255 - 0.5, as a [1,H,W] tensor.
Tensor<float> normalize(const Image& img);

// Crop box for one eye under the chosen path.
Box eye_box(const Box& face, const std::optional<EyeLandmarks>& landmarks, EyeSide side,
            const PatchGeometry& geometry);

// grayscale -> crop -> resize to patch dims.
Image extract_eye_patch(const Image& img, const Box& face,
                        const std::optional<EyeLandmarks>& landmarks, EyeSide side,
                        const PatchGeometry& geometry);

}  // namespace gazenet
