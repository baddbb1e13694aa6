#include "gazenet/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gazenet/error.hpp"
#include "gazenet/preprocess.hpp"

namespace gazenet {

void AugmentPolicy::validate() const {
  for (double s : blur_sigmas) require(s >= 0.0, "augment: blur sigma must be >= 0");
  for (double f : scale_factors) require(f > 0.0, "augment: scale factor must be > 0");
  for (double d : rotation_degrees) require(std::isfinite(d), "augment: rotation must be finite");
}

Image rotate(const Image& img, double degrees) {
  require(img.channels == 1, "rotate: expects a 1-channel image");
  const double t = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  const double cx = 0.5 * static_cast<double>(img.width - 1);
  const double cy = 0.5 * static_cast<double>(img.height - 1);
  Image out(img.width, img.height, 1);
  for (std::size_t y = 0; y < img.height; ++y) {
    const double dy = static_cast<double>(y) - cy;
    for (std::size_t x = 0; x < img.width; ++x) {
      const double dx = static_cast<double>(x) - cx;
      out.at(x, y) = to_u8(sample_bilinear(img, cx + c * dx - s * dy, cy + s * dx + c * dy));
    }
  }
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  require(sigma >= 0.0, "gaussian_blur: sigma must be >= 0");
  require(img.channels == 1, "gaussian_blur: expects a 1-channel image");
  if (sigma < 1e-6) return img;

  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto& v : kernel) v /= sum;

  const auto W = static_cast<std::ptrdiff_t>(img.width);
  const auto H = static_cast<std::ptrdiff_t>(img.height);
  const auto clampi = [](std::ptrdiff_t v, std::ptrdiff_t n) { return std::clamp<std::ptrdiff_t>(v, 0, n - 1); };

  std::vector<double> tmp(img.pixels.size());
  for (std::ptrdiff_t y = 0; y < H; ++y)
    for (std::ptrdiff_t x = 0; x < W; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k)
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               img.pixels[static_cast<std::size_t>(y * W + clampi(x + k, W))];
      tmp[static_cast<std::size_t>(y * W + x)] = acc;
    }

  Image out(img.width, img.height, 1);
  for (std::ptrdiff_t y = 0; y < H; ++y)
    for (std::ptrdiff_t x = 0; x < W; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k)
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               tmp[static_cast<std::size_t>(clampi(y + k, H) * W + x)];
      out.pixels[static_cast<std::size_t>(y * W + x)] = to_u8(acc);
    }
  return out;
}

Image rescale(const Image& img, double factor) {
  require(factor > 0.0 && std::isfinite(factor), "rescale: factor must be positive");
  require(img.channels == 1, "rescale: expects a 1-channel image");
  if (factor == 1.0) return img;
  const auto scaled = [&](std::size_t n) {
    return static_cast<long>(std::lround(static_cast<double>(n) * factor));
  };
  const long sw = scaled(img.width), sh = scaled(img.height);
  require(sw >= 1 && sh >= 1, "rescale: factor " + std::to_string(factor) +
                                  " leaves an empty image");
  const long w = static_cast<long>(img.width), h = static_cast<long>(img.height);
  if (factor < 1.0) {
    const Box centre{static_cast<int>((w - sw) / 2), static_cast<int>((h - sh) / 2),
                     static_cast<int>(sw), static_cast<int>(sh)};
    return resize_bilinear(crop(img, centre), img.width, img.height);
  }
  const Image big = resize_bilinear(img, static_cast<std::size_t>(sw), static_cast<std::size_t>(sh));
  return crop(big, Box{static_cast<int>((sw - w) / 2), static_cast<int>((sh - h) / 2),
                       static_cast<int>(w), static_cast<int>(h)});
}

PatchSet expand(const PatchSet& samples, const AugmentPolicy& policy, std::uint64_t /*seed*/) {
  require(samples.role == SplitRole::Train,
          "augment: refusing to expand test-split samples (train/test leakage)");
  policy.validate();
  PatchSet out;
  out.role = SplitRole::Train;
  out.items = samples.items;
  out.items.reserve(samples.items.size() * (1 + policy.variants_per_sample()));
  for (const auto& s : samples.items) {
    for (double deg : policy.rotation_degrees) out.items.push_back({rotate(s.patch, deg), s.label});
    for (double sigma : policy.blur_sigmas)
      out.items.push_back({gaussian_blur(s.patch, sigma), s.label});
    for (double f : policy.scale_factors) out.items.push_back({rescale(s.patch, f), s.label});
  }
  return out;
}

}  // namespace gazenet
