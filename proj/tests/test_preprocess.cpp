#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "gazenet/error.hpp"
#include "gazenet/pnm.hpp"
#include "gazenet/preprocess.hpp"
#include "oracle.hpp"

using namespace gazenet;

namespace {

Image rgb_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Image img(1, 1, 3);
  img.pixels = {r, g, b};
  return img;
}

Image random_image(std::size_t w, std::size_t h, std::mt19937_64& rng) {
  Image img(w, h);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() % 256);
  return img;
}

std::filesystem::path scratch_dir(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("grayscale") {
  CHECK(to_grayscale(rgb_pixel(255, 255, 255)).pixels[0] == 255);
  CHECK(to_grayscale(rgb_pixel(0, 0, 0)).pixels[0] == 0);
  CHECK(to_grayscale(rgb_pixel(255, 0, 0)).pixels[0] == 76);
  CHECK(to_grayscale(rgb_pixel(0, 255, 0)).pixels[0] == 150);
  CHECK(to_grayscale(rgb_pixel(0, 0, 255)).pixels[0] == 29);

  std::mt19937_64 rng(1);
  const Image g = random_image(7, 5, rng);
  CHECK(to_grayscale(g) == g);

  Image two(2, 2, 2);
  CHECK_THROWS_AS(to_grayscale(two), ValidationError);
}

TEST_CASE("resize_bilinear") {
  const Image img(2, 2, std::vector<std::uint8_t>{1, 2, 3, 4});
  CHECK(resize_bilinear(img, 2, 2) == img);

  // The single output sample lands on the centre of the four pixels.
  const FloatImage f(2, 2, std::vector<float>{1, 2, 3, 4});
  CHECK(resize_bilinear(f, 1, 1).pixels[0] == doctest::Approx(2.5));
  CHECK(resize_bilinear(img, 1, 1).pixels[0] == 3);  // 2.5 rounded half away from zero

  SUBCASE("agrees with the oracle on random sizes") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
      const std::size_t w = 1 + rng() % 12, h = 1 + rng() % 12;
      const std::size_t ow = 1 + rng() % 20, oh = 1 + rng() % 20;
      FloatImage src(w, h);
      std::vector<double> ref(w * h);
      for (std::size_t i = 0; i < w * h; ++i) ref[i] = src.pixels[i] = static_cast<float>(rng() % 256);
      const auto out = resize_bilinear(src, ow, oh);
      REQUIRE(out.width == ow);
      REQUIRE(out.height == oh);
      for (std::size_t i = 0; i < oh; ++i)
        for (std::size_t j = 0; j < ow; ++j) {
          const double x = (j + 0.5) * w / static_cast<double>(ow) - 0.5;
          const double y = (i + 0.5) * h / static_cast<double>(oh) - 0.5;
          CHECK(out.at(j, i) == doctest::Approx(oracle::bilinear(ref, w, h, x, y)).epsilon(1e-5));
        }
    }
  }
  SUBCASE("constant images stay constant, and the round trip is exact") {
    for (std::uint8_t v : {0, 17, 128, 255}) {
      const Image c(9, 6, 1, v);
      const Image big = resize_bilinear(c, 31, 4);
      for (auto p : big.pixels) CHECK(p == v);
      CHECK(resize_bilinear(big, 9, 6) == c);
    }
  }
  CHECK_THROWS_AS(resize_bilinear(img, 0, 3), ValidationError);
}

TEST_CASE("geometric eye rois") {
  const auto [l, r] = geometric_eye_rois(Box{0, 0, 100, 100});
  CHECK(l == Box{12, 22, 32, 26});
  CHECK(r == Box{56, 22, 32, 26});

  SUBCASE("translation and scale equivariance") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
      const int dx = static_cast<int>(rng() % 400) - 200, dy = static_cast<int>(rng() % 400) - 200;
      const auto [l2, r2] = geometric_eye_rois(Box{dx, dy, 100, 100});
      CHECK(l2 == Box{12 + dx, 22 + dy, 32, 26});
      CHECK(r2 == Box{56 + dx, 22 + dy, 32, 26});
      const int k = 1 + static_cast<int>(rng() % 5);
      const auto [l3, r3] = geometric_eye_rois(Box{0, 0, 100 * k, 100 * k});
      CHECK(l3 == Box{12 * k, 22 * k, 32 * k, 26 * k});
      CHECK(r3 == Box{56 * k, 22 * k, 32 * k, 26 * k});
    }
  }
  CHECK_THROWS_AS(geometric_eye_rois(Box{0, 0, 0, 10}), ValidationError);
}

TEST_CASE("landmark eye crop") {
  CHECK(landmark_eye_crop({30, 40}, {50, 40}) == Box{25, 31, 30, 18});
  CHECK(landmark_eye_crop({50, 40}, {30, 40}) == Box{25, 31, 30, 18});
  CHECK_THROWS_AS(landmark_eye_crop({3, 3}, {3, 3}), ValidationError);
}

TEST_CASE("crop") {
  Image img(4, 4);
  for (std::size_t i = 0; i < 16; ++i) img.pixels[i] = static_cast<std::uint8_t>(i);
  CHECK(crop(img, {0, 0, 4, 4}) == img);
  CHECK(crop(img, {2, 2, 4, 4}) == Image(2, 2, std::vector<std::uint8_t>{10, 11, 14, 15}));
  CHECK(crop(img, {-1, -1, 2, 2}) == Image(1, 1, std::vector<std::uint8_t>{0}));
  CHECK_THROWS_AS(crop(img, {10, 10, 2, 2}), ValidationError);
  CHECK_THROWS_AS(crop(img, {0, 0, 0, 2}), ValidationError);
}

TEST_CASE("normalize") {
  const Image img(3, 1, std::vector<std::uint8_t>{255, 0, 128});
  const auto t = normalize(img);
  CHECK(t.shape() == Shape{1, 1, 3});
  CHECK(t[0] == 0.5f);
  CHECK(t[1] == -0.5f);
  CHECK(t[2] == doctest::Approx(128.0 / 255.0 - 0.5).epsilon(1e-6));
  CHECK(t[2] == doctest::Approx(0.00196).epsilon(1e-2));

  std::mt19937_64 rng(5);
  for (float v : normalize(random_image(20, 20, rng)).data()) {
    CHECK(v >= -0.5f);
    CHECK(v <= 0.5f);
  }
}

TEST_CASE("eye patch extraction") {
  std::mt19937_64 rng(9);
  const Image face = random_image(120, 100, rng);
  const Box fbox{10, 5, 100, 90};
  const EyeLandmarks lm{{30, 40}, {50, 40}, {70, 41}, {92, 42}};

  const auto roi = PatchGeometry::roi_default();
  const auto ert = PatchGeometry::ert_default();
  for (auto side : {EyeSide::Left, EyeSide::Right}) {
    const Image a = extract_eye_patch(face, fbox, std::nullopt, side, roi);
    CHECK(a.width == 50);
    CHECK(a.height == 42);
    CHECK(extract_eye_patch(face, fbox, std::nullopt, side, roi) == a);
    const Image b = extract_eye_patch(face, fbox, lm, side, ert);
    CHECK(b.width == 25);
    CHECK(b.height == 15);
    CHECK(normalize(extract_eye_patch(face, fbox, lm, side, ert)) == normalize(b));
  }
  CHECK(eye_box(fbox, lm, EyeSide::Left, ert) == Box{25, 31, 30, 18});
  CHECK_THROWS_AS(extract_eye_patch(face, fbox, std::nullopt, EyeSide::Left, ert), ValidationError);

  Image rgb(120, 100, 3, 200);
  const Image p = extract_eye_patch(rgb, fbox, std::nullopt, EyeSide::Right, roi);
  CHECK(p.channels == 1);
  for (auto v : p.pixels) CHECK(v == 200);
}

TEST_CASE("pnm round trip") {
  const auto dir = scratch_dir("gazenet_test_pnm");
  std::mt19937_64 rng(2);
  const Image gray = random_image(13, 7, rng);
  write_pnm(gray, dir / "g.pgm");
  CHECK(read_pnm(dir / "g.pgm") == gray);

  Image rgb(5, 3, 3);
  for (auto& p : rgb.pixels) p = static_cast<std::uint8_t>(rng() % 256);
  write_pnm(rgb, dir / "c.ppm");
  CHECK(read_pnm(dir / "c.ppm") == rgb);

  {
    std::ofstream out(dir / "comment.pgm", std::ios::binary);
    out << "P5\n# a comment\n2 1\n255\n";
    out.put(static_cast<char>(9));
    out.put(static_cast<char>(250));
  }
  CHECK(read_pnm(dir / "comment.pgm") == Image(2, 1, std::vector<std::uint8_t>{9, 250}));

  {
    std::ofstream out(dir / "short.pgm", std::ios::binary);
    out << "P5\n4 4\n255\n" << "abc";
  }
  CHECK_THROWS_AS(read_pnm(dir / "short.pgm"), IoError);
  {
    std::ofstream out(dir / "ascii.pgm");
    out << "P2\n1 1\n255\n7\n";
  }
  CHECK_THROWS_AS(read_pnm(dir / "ascii.pgm"), IoError);
  {
    std::ofstream out(dir / "deep.pgm", std::ios::binary);
    out << "P5\n1 1\n65535\n" << "ab";
  }
  CHECK_THROWS_AS(read_pnm(dir / "deep.pgm"), IoError);
  CHECK_THROWS_AS(read_pnm(dir / "missing.pgm"), IoError);
  std::filesystem::remove_all(dir);
}
