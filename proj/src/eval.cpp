#include "gazenet/eval.hpp"

#include "gazenet/error.hpp"
#include "gazenet/fusion.hpp"

namespace gazenet {

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted) {
  require(truth < n_ && predicted < n_, "confusion matrix: class index out of range");
  ++counts_[truth * n_ + predicted];
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  require(other.n_ == n_, "confusion matrix: size mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < n_; ++j) t += at(truth, j);
  return t;
}

double ConfusionMatrix::accuracy() const {
  const auto t = total();
  return t == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(t);
}

std::vector<std::optional<double>> ConfusionMatrix::per_class_accuracy() const {
  std::vector<std::optional<double>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto r = row_sum(i);
    if (r > 0) out[i] = static_cast<double>(at(i, i)) / static_cast<double>(r);
  }
  return out;
}

const char* eye_mode_name(EyeMode mode) {
  switch (mode) {
    case EyeMode::Left: return "left";
    case EyeMode::Right: return "right";
    case EyeMode::Both: return "both";
  }
  return "?";
}

EvalResult summarize(EyeMode mode, const ConfusionMatrix& confusion) {
  return EvalResult{mode, confusion.accuracy(), confusion.per_class_accuracy(), confusion};
}

EvalResult evaluate(const Model& left, const Model& right, std::span<const EyePairExample> test,
                    EyeMode mode) {
  require(left.n_classes() == right.n_classes(),
          "evaluate: left model has " + std::to_string(left.n_classes()) +
              " classes, right model has " + std::to_string(right.n_classes()));
  require(!test.empty(), "evaluate: empty test set");
  ConfusionMatrix cm(left.n_classes());
  for (const auto& ex : test) {
    ScoreVector score;
    switch (mode) {
      case EyeMode::Left: score = left.forward(ex.left); break;
      case EyeMode::Right: score = right.forward(ex.right); break;
      case EyeMode::Both: score = fuse_scores(left.forward(ex.left), right.forward(ex.right)); break;
    }
    cm.add(ex.label, predict_class(score));
  }
  return summarize(mode, cm);
}

}  // namespace gazenet
