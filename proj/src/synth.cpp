#include "gazenet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gazenet/error.hpp"
#include "gazenet/pnm.hpp"
#include "gazenet/rng.hpp"

namespace gazenet {

namespace {

constexpr std::size_t kImageSize = 128;

struct EyeDraw {
  double cx = 0.0, cy = 0.0;  // eye centre
  double half_w = 0.0;        // half corner distance
  double half_h = 0.0;        // half eye opening
  double iris_r = 0.0;
  double iris_dx = 0.0, iris_dy = 0.0;
};

void draw_eye(std::vector<double>& canvas, const EyeDraw& e, double sclera, double iris) {
  const auto lo_x = static_cast<long>(std::floor(e.cx - e.half_w - 2));
  const auto hi_x = static_cast<long>(std::ceil(e.cx + e.half_w + 2));
  const auto lo_y = static_cast<long>(std::floor(e.cy - e.half_h - 2));
  const auto hi_y = static_cast<long>(std::ceil(e.cy + e.half_h + 2));
  const auto n = static_cast<long>(kImageSize);
  for (long y = std::max(0L, lo_y); y <= std::min(n - 1, hi_y); ++y) {
    for (long x = std::max(0L, lo_x); x <= std::min(n - 1, hi_x); ++x) {
      const double u = (static_cast<double>(x) - e.cx) / e.half_w;
      const double v = (static_cast<double>(y) - e.cy) / e.half_h;
      const double q = u * u + v * v;
      double& px = canvas[static_cast<std::size_t>(y) * kImageSize + static_cast<std::size_t>(x)];
      if (q > 1.25) continue;
      if (q > 1.0) {  // eyelid rim
        px = 0.5 * px + 0.5 * 80.0;
        continue;
      }
      const double ix = static_cast<double>(x) - (e.cx + e.iris_dx);
      const double iy = static_cast<double>(y) - (e.cy + e.iris_dy);
      const double r = std::sqrt(ix * ix + iy * iy);
      if (r <= 0.45 * e.iris_r) px = 20.0;  // pupil
      else if (r <= e.iris_r) px = iris;
      else px = sclera;
    }
  }
}

}  // namespace

Point iris_offset(EacClass c) {
  static constexpr double table[kEacCount][2] = {
      {0, 0}, {-1, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {1, 1}};
  const auto& o = table[static_cast<std::size_t>(c)];
  return {o[0] * kIrisShiftX, o[1] * kIrisShiftY};
}

std::vector<SynthItem> generate_synthetic(std::size_t n_per_class, std::uint64_t seed) {
  require(n_per_class >= 1, "synth: n_per_class must be at least 1");
  std::vector<SynthItem> items;
  items.reserve(n_per_class * kEacCount);
  std::size_t index = 0;
  for (std::size_t c = 0; c < kEacCount; ++c) {
    for (std::size_t k = 0; k < n_per_class; ++k, ++index) {
      Rng rng(derive_seed(seed, index));
      const auto eac = static_cast<EacClass>(c);

      const int size = 96 + static_cast<int>(rng.below(17));
      const int fx = static_cast<int>(rng.below(kImageSize - static_cast<std::size_t>(size) + 1));
      const int fy = static_cast<int>(rng.below(kImageSize - static_cast<std::size_t>(size) + 1));
      const double s = size;

      const double skin = rng.uniform(135.0, 175.0);
      const double sclera = rng.uniform(200.0, 235.0);
      const double iris = rng.uniform(45.0, 75.0);
      std::vector<double> canvas(kImageSize * kImageSize);
      const double shade = rng.uniform(-0.15, 0.15);
      for (std::size_t y = 0; y < kImageSize; ++y)
        for (std::size_t x = 0; x < kImageSize; ++x)
          canvas[y * kImageSize + x] =
              skin * (1.0 + shade * (static_cast<double>(x) / kImageSize - 0.5));

      const double d = 0.24 * s * rng.uniform(0.95, 1.05);
      const Point off = iris_offset(eac);
      Sample sample;
      sample.eac = eac;
      sample.face = Box{fx, fy, size, size};
      sample.subject_id = "s" + std::to_string(k % 10);

      EyeDraw eyes[2];
      for (int side = 0; side < 2; ++side) {
        EyeDraw& e = eyes[side];
        e.cx = fx + (side == 0 ? 0.28 : 0.72) * s + rng.uniform(-1.0, 1.0);
        e.cy = fy + 0.35 * s + rng.uniform(-1.0, 1.0);
        e.half_w = 0.5 * d;
        e.half_h = 0.22 * d;
        e.iris_r = 0.19 * d;
        e.iris_dx = off.x * d;
        e.iris_dy = off.y * 2.0 * e.half_h;
        draw_eye(canvas, e, sclera, iris);
      }
      sample.landmarks = EyeLandmarks{{eyes[0].cx - eyes[0].half_w, eyes[0].cy},
                                      {eyes[0].cx + eyes[0].half_w, eyes[0].cy},
                                      {eyes[1].cx - eyes[1].half_w, eyes[1].cy},
                                      {eyes[1].cx + eyes[1].half_w, eyes[1].cy}};

      Image img(kImageSize, kImageSize, 1);
      for (std::size_t i = 0; i < canvas.size(); ++i) img.pixels[i] = to_u8(canvas[i] + rng.normal(0.0, 5.0));

      char name[32];
      std::snprintf(name, sizeof name, "img_%04zu.pgm", index);
      sample.image_path = name;
      items.push_back({std::move(img), std::move(sample)});
    }
  }
  return items;
}

std::filesystem::path write_synthetic(const std::filesystem::path& out_dir,
                                      std::size_t n_per_class, std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw IoError("cannot create output directory: " + out_dir.string());
  const auto items = generate_synthetic(n_per_class, seed);
  std::vector<Sample> samples;
  samples.reserve(items.size());
  for (const auto& it : items) {
    write_pnm(it.image, out_dir / it.sample.image_path);
    samples.push_back(it.sample);
  }
  const auto manifest = out_dir / "manifest.csv";
  save_manifest(samples, manifest);
  return manifest;
}

}  // namespace gazenet
