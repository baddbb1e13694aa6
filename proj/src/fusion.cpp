#include "gazenet/fusion.hpp"

#include <cmath>

#include "gazenet/error.hpp"

namespace gazenet {

bool is_valid_scores(const ScoreVector& s, double tol) {
  if (s.empty()) return false;
  double sum = 0.0;
  for (double v : s) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

ScoreVector fuse_scores(const ScoreVector& left, const ScoreVector& right) {
  require(left.size() == right.size(), "fuse_scores: length mismatch (" +
                                           std::to_string(left.size()) + " vs " +
                                           std::to_string(right.size()) + ")");
  require(is_valid_scores(left) && is_valid_scores(right),
          "fuse_scores: inputs must be probability vectors");
  ScoreVector out(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) out[i] = (left[i] + right[i]) / 2.0;
  return out;
}

std::size_t predict_class(const ScoreVector& score) {
  require(!score.empty(), "predict_class: empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < score.size(); ++i)
    if (score[i] > score[best]) best = i;
  return best;
}

}  // namespace gazenet
