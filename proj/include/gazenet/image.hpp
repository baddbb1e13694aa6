#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gazenet {

// Row-major raster, channels interleaved.
template <typename Pixel>
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;
  std::vector<Pixel> pixels;

  Raster() = default;
  Raster(std::size_t w, std::size_t h, std::size_t c = 1, Pixel fill = Pixel{})
      : width(w), height(h), channels(c), pixels(w * h * c, fill) {}
  Raster(std::size_t w, std::size_t h, std::vector<Pixel> data)
      : width(w), height(h), channels(1), pixels(std::move(data)) {}

  Pixel& at(std::size_t x, std::size_t y, std::size_t c = 0) {
    return pixels[(y * width + x) * channels + c];
  }
  Pixel at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return pixels[(y * width + x) * channels + c];
  }
  bool empty() const { return pixels.empty(); }

  bool operator==(const Raster&) const = default;
};

using Image = Raster<std::uint8_t>;
using FloatImage = Raster<float>;

// Pixel rectangle; (x, y) is the top-left corner.
struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const Box&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

// Bilinear sample with coordinates clamped to the raster edge. Single channel.
template <typename Pixel>
double sample_bilinear(const Raster<Pixel>& img, double x, double y);

std::uint8_t to_u8(double v);

}  // namespace gazenet
