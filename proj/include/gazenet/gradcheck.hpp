#pragma once

#include <string>
#include <vector>

#include "gazenet/model.hpp"

namespace gazenet {

struct ParamCheck {
  std::size_t layer = 0;
  std::string name;  // "conv0.weights", "dense3.bias", ...
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<ParamCheck> params;
  double max_rel_error = 0.0;
  double threshold = 1e-4;
  bool pass = false;
};

// Central differences (L(p+h) - L(p-h)) / 2h against backprop for every
// parameter element. Per-tensor error is max|a-n| / max(|a|, |n|, 1e-12)
// with both maxima taken over the tensor.
GradCheckReport grad_check(const ModelD& model, const Tensor<double>& input,
                           std::size_t true_class, double h = 1e-5, double threshold = 1e-4);

// Same measure between two arrays.
double relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric);

}  // namespace gazenet
