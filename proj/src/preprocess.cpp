#include "gazenet/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "gazenet/error.hpp"

namespace gazenet {

const char* eye_side_name(EyeSide side) { return side == EyeSide::Left ? "left" : "right"; }
const char* path_mode_name(PathMode mode) { return mode == PathMode::Roi ? "roi" : "ert"; }

Image to_grayscale(const Image& img) {
  require(img.channels == 1 || img.channels == 3,
          "to_grayscale: unsupported channel count " + std::to_string(img.channels));
  if (img.channels == 1) return img;
  Image out(img.width, img.height, 1);
  for (std::size_t i = 0; i < img.width * img.height; ++i) {
    const double r = img.pixels[3 * i], g = img.pixels[3 * i + 1], b = img.pixels[3 * i + 2];
    out.pixels[i] = to_u8(0.299 * r + 0.587 * g + 0.114 * b);
  }
  return out;
}

template <typename Pixel>
Raster<Pixel> resize_bilinear(const Raster<Pixel>& img, std::size_t out_w, std::size_t out_h) {
  require(out_w >= 1 && out_h >= 1, "resize_bilinear: empty target size");
  require(img.channels == 1 && !img.empty(), "resize_bilinear: expects a non-empty 1-channel image");
  Raster<Pixel> out(out_w, out_h, 1);
  const double sx = static_cast<double>(img.width) / static_cast<double>(out_w);
  const double sy = static_cast<double>(img.height) / static_cast<double>(out_h);
  for (std::size_t i = 0; i < out_h; ++i) {
    const double y = (static_cast<double>(i) + 0.5) * sy - 0.5;
    for (std::size_t j = 0; j < out_w; ++j) {
      const double x = (static_cast<double>(j) + 0.5) * sx - 0.5;
      const double v = sample_bilinear(img, x, y);
      if constexpr (std::is_same_v<Pixel, std::uint8_t>) out.at(j, i) = to_u8(v);
      else out.at(j, i) = static_cast<Pixel>(v);
    }
  }
  return out;
}

template Image resize_bilinear(const Image&, std::size_t, std::size_t);
template FloatImage resize_bilinear(const FloatImage&, std::size_t, std::size_t);

std::pair<Box, Box> geometric_eye_rois(const Box& face, const RoiFractions& f) {
  require(face.w > 0 && face.h > 0, "geometric_eye_rois: degenerate face box");
  const double w = face.w, h = face.h;
  const auto r = [](double v) { return static_cast<int>(std::lround(v)); };
  const int ey = face.y + r(f.y * h);
  const int ew = std::max(1, r(f.w * w));
  const int eh = std::max(1, r(f.h * h));
  return {Box{face.x + r(f.left_x * w), ey, ew, eh}, Box{face.x + r(f.right_x * w), ey, ew, eh}};
}

Box landmark_eye_crop(Point inner, Point outer, const LandmarkMargins& m) {
  const double d = std::hypot(outer.x - inner.x, outer.y - inner.y);
  require(d > 0.0, "landmark_eye_crop: eye corners coincide");
  const double cx = 0.5 * (inner.x + outer.x), cy = 0.5 * (inner.y + outer.y);
  const double bw = m.width * d, bh = m.height * d;
  return Box{static_cast<int>(std::lround(cx - 0.5 * bw)), static_cast<int>(std::lround(cy - 0.5 * bh)),
             std::max(1, static_cast<int>(std::lround(bw))),
             std::max(1, static_cast<int>(std::lround(bh)))};
}

Image crop(const Image& img, const Box& box) {
  const long x0 = std::max<long>(0, box.x);
  const long y0 = std::max<long>(0, box.y);
  const long x1 = std::min<long>(static_cast<long>(img.width), static_cast<long>(box.x) + box.w);
  const long y1 = std::min<long>(static_cast<long>(img.height), static_cast<long>(box.y) + box.h);
  require(box.w > 0 && box.h > 0 && x1 > x0 && y1 > y0,
          "crop: box (" + std::to_string(box.x) + "," + std::to_string(box.y) + "," +
              std::to_string(box.w) + "," + std::to_string(box.h) + ") lies outside the " +
              std::to_string(img.width) + "x" + std::to_string(img.height) + " image");
  const auto w = static_cast<std::size_t>(x1 - x0), h = static_cast<std::size_t>(y1 - y0);
  Image out(w, h, img.channels);
  for (std::size_t r = 0; r < h; ++r) {
    const auto src = img.pixels.begin() +
                     static_cast<std::ptrdiff_t>(((static_cast<std::size_t>(y0) + r) * img.width +
                                                  static_cast<std::size_t>(x0)) * img.channels);
    std::copy(src, src + static_cast<std::ptrdiff_t>(w * img.channels),
              out.pixels.begin() + static_cast<std::ptrdiff_t>(r * w * img.channels));
  }
  return out;
}

Tensor<float> normalize(const Image& img) {
  require(img.channels == 1, "normalize: expects a 1-channel image");
  require(!img.empty(), "normalize: empty image");
  Tensor<float> t({1, img.height, img.width});
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    t[i] = static_cast<float>(img.pixels[i] / 255.0 - 0.5);
  return t;
}

Box eye_box(const Box& face, const std::optional<EyeLandmarks>& landmarks, EyeSide side,
            const PatchGeometry& geometry) {
  if (geometry.mode == PathMode::Roi) {
    const auto [l, r] = geometric_eye_rois(face, geometry.roi);
    return side == EyeSide::Left ? l : r;
  }
  require(landmarks.has_value(),
          "ert mode requires landmark columns lo_x,lo_y,li_x,li_y,ri_x,ri_y,ro_x,ro_y");
  return side == EyeSide::Left
             ? landmark_eye_crop(landmarks->left_inner, landmarks->left_outer, geometry.margins)
             : landmark_eye_crop(landmarks->right_inner, landmarks->right_outer, geometry.margins);
}

Image extract_eye_patch(const Image& img, const Box& face,
                        const std::optional<EyeLandmarks>& landmarks, EyeSide side,
                        const PatchGeometry& geometry) {
  const Box box = eye_box(face, landmarks, side, geometry);
  return resize_bilinear(crop(to_grayscale(img), box), geometry.patch_w, geometry.patch_h);
}

}  // namespace gazenet
