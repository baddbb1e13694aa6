#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions directly and share no code with the library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// out[o][i][j] = b[o] + sum_{c,u,v} w[o][c][u][v] * x[c][i+u-kh/2][j+v-kw/2], zero outside.
inline std::vector<double> conv_same(const std::vector<double>& x, std::size_t C, std::size_t H,
                                     std::size_t W, const std::vector<double>& w, std::size_t O,
                                     std::size_t KH, std::size_t KW, const std::vector<double>& b) {
  std::vector<double> out(O * H * W);
  for (std::size_t o = 0; o < O; ++o)
    for (std::size_t i = 0; i < H; ++i)
      for (std::size_t j = 0; j < W; ++j) {
        double acc = b[o];
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t u = 0; u < KH; ++u)
            for (std::size_t v = 0; v < KW; ++v) {
              const long si = static_cast<long>(i + u) - static_cast<long>(KH / 2);
              const long sj = static_cast<long>(j + v) - static_cast<long>(KW / 2);
              if (si < 0 || sj < 0 || si >= static_cast<long>(H) || sj >= static_cast<long>(W)) continue;
              acc += w[((o * C + c) * KH + u) * KW + v] * x[(c * H + si) * W + sj];
            }
        out[(o * H + i) * W + j] = acc;
      }
  return out;
}

// Central-difference gradient of f at p.
inline std::vector<double> numeric_grad(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> p, double h) {
  std::vector<double> g(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double saved = p[k];
    p[k] = saved + h;
    const double plus = f(p);
    p[k] = saved - h;
    const double minus = f(p);
    p[k] = saved;
    g[k] = (plus - minus) / (2.0 * h);
  }
  return g;
}

inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& n) {
  double diff = 0.0, scale = 1e-12;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - n[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(n[i])});
  }
  return diff / scale;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Bilinear sample with edge clamping, written from the definition.
inline double bilinear(const std::vector<double>& img, std::size_t w, std::size_t h, double x,
                       double y) {
  x = std::min(std::max(x, 0.0), static_cast<double>(w - 1));
  y = std::min(std::max(y, 0.0), static_cast<double>(h - 1));
  const std::size_t x0 = static_cast<std::size_t>(x), y0 = static_cast<std::size_t>(y);
  const std::size_t x1 = x0 + 1 < w ? x0 + 1 : x0, y1 = y0 + 1 < h ? y0 + 1 : y0;
  const double fx = x - x0, fy = y - y0;
  return img[y0 * w + x0] * (1 - fx) * (1 - fy) + img[y0 * w + x1] * fx * (1 - fy) +
         img[y1 * w + x0] * (1 - fx) * fy + img[y1 * w + x1] * fx * fy;
}

}  // namespace oracle
