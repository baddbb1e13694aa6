#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gazenet/model.hpp"

namespace gazenet {

// Rows are true classes, columns predictions.
class ConfusionMatrix {
public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t n_classes)
      : n_(n_classes), counts_(n_classes * n_classes, 0) {}

  std::size_t n_classes() const { return n_; }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * n_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted);
  void merge(const ConfusionMatrix& other);

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t truth) const;
  double accuracy() const;
  // nullopt for classes with no test samples.
  std::vector<std::optional<double>> per_class_accuracy() const;

  bool operator==(const ConfusionMatrix&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> counts_;
};

enum class EyeMode { Left, Right, Both };
const char* eye_mode_name(EyeMode mode);

struct EyePairExample {
  Tensor<float> left;
  Tensor<float> right;
  std::size_t label = 0;
};

struct EvalResult {
  EyeMode mode = EyeMode::Both;
  double accuracy = 0.0;
  std::vector<std::optional<double>> per_class;
  ConfusionMatrix confusion;
};

EvalResult summarize(EyeMode mode, const ConfusionMatrix& confusion);

// Single-eye modes run only the matching model; Both fuses the two scores.
EvalResult evaluate(const Model& left, const Model& right, std::span<const EyePairExample> test,
                    EyeMode mode);

}  // namespace gazenet
