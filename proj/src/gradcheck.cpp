#include "gazenet/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "gazenet/error.hpp"
#include "gazenet/layers.hpp"
#include "gazenet/train.hpp"

namespace gazenet {

double relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric) {
  require(analytic.size() == numeric.size(), "relative_error: length mismatch");
  double diff = 0.0, scale = 1e-12;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff = std::max(diff, std::abs(analytic[i] - numeric[i]));
    scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
  }
  return diff / scale;
}

GradCheckReport grad_check(const ModelD& model, const Tensor<double>& input,
                           std::size_t true_class, double h, double threshold) {
  require(h >= 1e-7 && h <= 1e-4, "grad_check: step h must lie in [1e-7, 1e-4]");
  require(true_class < model.n_classes(), "grad_check: class index out of range");

  auto analytic = Gradients<double>::zeros_like(model);
  ForwardTrace<double> trace;
  accumulate_gradients(model, Example<double>{input, true_class}, trace, analytic);

  ModelD work = model;
  GradCheckReport report;
  report.threshold = threshold;
  const auto& layers = model.layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    if (!layers[li].has_params()) continue;
    for (int which = 0; which < 2; ++which) {
      auto& param = which == 0 ? work.layers()[li].weights : work.layers()[li].bias;
      const auto& grad = which == 0 ? analytic.weights[li] : analytic.bias[li];
      std::vector<double> a(param.size()), n(param.size());
      // Layers before li are unaffected by the perturbation; restart there.
      ForwardTrace<double> scratch = trace;
      auto loss_at = [&]() {
        forward_trace(work, input, scratch, li);
        return softmax_ce(scratch.logits, true_class).loss;
      };
      for (std::size_t k = 0; k < param.size(); ++k) {
        const double saved = param[k];
        param[k] = saved + h;
        const double plus = loss_at();
        param[k] = saved - h;
        const double minus = loss_at();
        param[k] = saved;
        n[k] = (plus - minus) / (2.0 * h);
        a[k] = grad[k];
      }
      ParamCheck check;
      check.layer = li;
      check.name = std::string(layer_kind_name(layers[li].spec.kind)) + std::to_string(li) +
                   (which == 0 ? ".weights" : ".bias");
      check.max_rel_error = relative_error(a, n);
      report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
      report.params.push_back(std::move(check));
    }
  }
  report.pass = report.max_rel_error < threshold;
  return report;
}

}  // namespace gazenet
