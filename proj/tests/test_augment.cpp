#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gazenet/augment.hpp"
#include "gazenet/error.hpp"
#include "gazenet/preprocess.hpp"
#include "oracle.hpp"

using namespace gazenet;

namespace {

Image random_image(std::size_t w, std::size_t h, std::mt19937_64& rng) {
  Image img(w, h);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() % 256);
  return img;
}

std::vector<double> to_double(const Image& img) { return {img.pixels.begin(), img.pixels.end()}; }

int max_abs_diff(const Image& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) worst = std::max(worst, std::abs(a.pixels[i] - b[i]));
  return static_cast<int>(std::ceil(worst - 1e-9));
}

}  // namespace

TEST_CASE("rotate") {
  const Image img(2, 2, std::vector<std::uint8_t>{1, 2, 3, 4});
  CHECK(rotate(img, 0.0) == img);
  CHECK(rotate(img, 90.0) == Image(2, 2, std::vector<std::uint8_t>{2, 4, 1, 3}));
  CHECK(rotate(img, 180.0) == Image(2, 2, std::vector<std::uint8_t>{4, 3, 2, 1}));
  CHECK(rotate(img, 360.0) == img);

  std::mt19937_64 rng(4);
  for (double deg : {-10.0, -5.0, 5.0, 10.0, 33.0}) {
    const Image c(11, 7, 1, 93);
    CHECK(rotate(c, deg) == c);

    const Image r = random_image(25, 15, rng);
    const auto src = to_double(r);
    std::vector<double> want(src.size());
    const double t = deg * std::numbers::pi / 180.0, cx = 12.0, cy = 7.0;
    for (std::size_t y = 0; y < 15; ++y)
      for (std::size_t x = 0; x < 25; ++x) {
        const double dx = x - cx, dy = y - cy;
        want[y * 25 + x] = oracle::bilinear(src, 25, 15, cx + std::cos(t) * dx - std::sin(t) * dy,
                                            cy + std::sin(t) * dx + std::cos(t) * dy);
      }
    CHECK(max_abs_diff(rotate(r, deg), want) <= 1);
  }
}

TEST_CASE("gaussian blur") {
  std::mt19937_64 rng(6);
  const Image r = random_image(16, 12, rng);
  CHECK(gaussian_blur(r, 0.0) == r);
  for (double sigma : {0.5, 1.0, 2.5}) {
    const Image c(9, 9, 1, 200);
    CHECK(gaussian_blur(c, sigma) == c);

    // Direct 2-D convolution with the same truncated, normalized kernel.
    const int radius = static_cast<int>(std::ceil(3 * sigma));
    double norm = 0.0;
    for (int k = -radius; k <= radius; ++k) norm += std::exp(-k * k / (2 * sigma * sigma));
    const auto src = to_double(r);
    std::vector<double> want(src.size());
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 16; ++x) {
        double acc = 0.0;
        for (int u = -radius; u <= radius; ++u)
          for (int v = -radius; v <= radius; ++v) {
            const int sy = std::clamp(y + u, 0, 11), sx = std::clamp(x + v, 0, 15);
            acc += std::exp(-(u * u + v * v) / (2 * sigma * sigma)) * src[sy * 16 + sx];
          }
        want[y * 16 + x] = acc / (norm * norm);
      }
    CHECK(max_abs_diff(gaussian_blur(r, sigma), want) <= 1);
  }
  CHECK_THROWS_AS(gaussian_blur(r, -1.0), ValidationError);
}

TEST_CASE("rescale") {
  std::mt19937_64 rng(8);
  const Image r = random_image(25, 15, rng);
  CHECK(rescale(r, 1.0) == r);
  for (double f : {0.5, 0.9, 1.1, 2.0}) {
    const Image c(25, 15, 1, 61);
    CHECK(rescale(c, f) == c);
    const Image out = rescale(r, f);
    CHECK(out.width == 25);
    CHECK(out.height == 15);
  }

  SUBCASE("factor 2 on 4x4: upsample to 8x8, keep the centre") {
    Image img(4, 4);
    for (std::size_t i = 0; i < 16; ++i) img.pixels[i] = static_cast<std::uint8_t>(16 * i);
    const auto src = to_double(img);
    std::vector<double> want(16);
    // Output pixel (j, i) is 8x8 pixel (j+2, i+2), sampled at ((k+0.5)/2 - 0.5).
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        want[i * 4 + j] = oracle::bilinear(src, 4, 4, (j + 2.5) / 2.0 - 0.5, (i + 2.5) / 2.0 - 0.5);
    CHECK(max_abs_diff(rescale(img, 2.0), want) <= 0);
  }
  SUBCASE("factor 0.5 on 4x4: central 2x2 resized up to 4x4") {
    Image img(4, 4);
    for (std::size_t i = 0; i < 16; ++i) img.pixels[i] = static_cast<std::uint8_t>(16 * i);
    const Image centre(2, 2, std::vector<std::uint8_t>{80, 96, 144, 160});
    CHECK(rescale(img, 0.5) == resize_bilinear(centre, 4, 4));
  }
  CHECK_THROWS_AS(rescale(r, 0.0), ValidationError);
  CHECK_THROWS_AS(rescale(r, 0.01), ValidationError);
}

TEST_CASE("expand") {
  std::mt19937_64 rng(10);
  PatchSet set;
  for (std::size_t i = 0; i < 10; ++i) set.items.push_back({random_image(25, 15, rng), i % 7});

  const PatchSet out = expand(set, AugmentPolicy{}, 1);
  CHECK(AugmentPolicy{}.variants_per_sample() == 8);
  REQUIRE(out.items.size() == 90);
  for (std::size_t i = 0; i < 10; ++i) CHECK(out.items[i].patch == set.items[i].patch);
  for (std::size_t s = 0; s < 10; ++s)
    for (std::size_t v = 0; v < 8; ++v) {
      const auto& item = out.items[10 + s * 8 + v];
      CHECK(item.label == set.items[s].label);
      CHECK(item.patch.width == 25);
      CHECK(item.patch.height == 15);
    }
  CHECK(out.items[10].patch == rotate(set.items[0].patch, -10.0));
  CHECK(out.items[14].patch == gaussian_blur(set.items[0].patch, 0.5));
  CHECK(out.items[17].patch == rescale(set.items[0].patch, 1.1));

  const PatchSet same = expand(set, AugmentPolicy::none(), 1);
  REQUIRE(same.items.size() == set.items.size());
  for (std::size_t i = 0; i < 10; ++i) CHECK(same.items[i].patch == set.items[i].patch);

  AugmentPolicy identity{{0.0}, {0.0}, {1.0}};
  const PatchSet ident = expand(set, identity, 1);
  for (std::size_t i = 10; i < ident.items.size(); ++i)
    CHECK(ident.items[i].patch == set.items[(i - 10) / 3].patch);

  PatchSet test = set;
  test.role = SplitRole::Test;
  CHECK_THROWS_AS(expand(test, AugmentPolicy{}, 1), ValidationError);
  CHECK_THROWS_AS(expand(set, AugmentPolicy{{}, {-0.5}, {}}, 1), ValidationError);
  CHECK_THROWS_AS(expand(set, AugmentPolicy{{}, {}, {0.0}}, 1), ValidationError);
}
