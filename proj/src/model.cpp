#include "gazenet/model.hpp"

#include <cmath>

#include "gazenet/error.hpp"
#include "gazenet/layers.hpp"
#include "gazenet/rng.hpp"

namespace gazenet {

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv2D: return "conv";
    case LayerKind::ReLU: return "relu";
    case LayerKind::MaxPool2: return "pool";
    case LayerKind::Dense: return "dense";
    case LayerKind::SoftmaxCE: return "softmax";
  }
  return "?";
}

namespace {

Shape next_shape(const Shape& in, const LayerSpec& spec, std::size_t index) {
  const std::string where = "layer " + std::to_string(index) + " (" + layer_kind_name(spec.kind) + ")";
  switch (spec.kind) {
    case LayerKind::Conv2D:
      require(in.size() == 3, where + ": expects [C,H,W] input, got " + shape_str(in));
      require(spec.out_channels > 0, where + ": out_channels must be positive");
      require(spec.kernel_h % 2 == 1 && spec.kernel_w % 2 == 1,
              where + ": kernel dimensions must be odd positive integers");
      return {spec.out_channels, in[1], in[2]};
    case LayerKind::ReLU:
      return in;
    case LayerKind::MaxPool2:
      require(in.size() == 3, where + ": expects [C,H,W] input, got " + shape_str(in));
      require(in[1] >= 2 && in[2] >= 2,
              where + ": spatial extent " + shape_str(in) + " too small for 2x2 pooling");
      return {in[0], in[1] / 2, in[2] / 2};
    case LayerKind::Dense:
      require(spec.out_units > 0, where + ": out_units must be positive");
      return {spec.out_units};
    case LayerKind::SoftmaxCE:
      require(in.size() == 1, where + ": softmax expects a flat score vector, got " + shape_str(in));
      return in;
  }
  fail(where + ": unknown layer kind");
}

void check_stack(const std::vector<LayerSpec>& specs) {
  require(!specs.empty() && specs.back().kind == LayerKind::SoftmaxCE,
          "model must end with a SoftmaxCE layer");
  for (std::size_t i = 0; i + 1 < specs.size(); ++i)
    require(specs[i].kind != LayerKind::SoftmaxCE, "SoftmaxCE may only be the final layer");
}

template <typename Real>
Tensor<Real> apply_layer(const Layer<Real>& layer, const Tensor<Real>& x) {
  switch (layer.spec.kind) {
    case LayerKind::Conv2D: return conv2d_forward(x, layer.weights, layer.bias);
    case LayerKind::ReLU: return relu_forward(x);
    case LayerKind::MaxPool2: return maxpool2_forward(x).output;
    case LayerKind::Dense: return dense_forward(x, layer.weights, layer.bias);
    case LayerKind::SoftmaxCE: return softmax(x);
  }
  fail("unknown layer kind");
}

}  // namespace

std::vector<Shape> shape_trace(const InputShape& input, const std::vector<LayerSpec>& specs) {
  require(input.channels > 0 && input.height > 0 && input.width > 0,
          "input shape must be positive");
  std::vector<Shape> trace{input.shape()};
  for (std::size_t i = 0; i < specs.size(); ++i) trace.push_back(next_shape(trace.back(), specs[i], i));
  return trace;
}

template <typename Real>
BasicModel<Real>::BasicModel(InputShape input, const std::vector<LayerSpec>& specs,
                             std::uint64_t seed)
    : input_(input) {
  check_stack(specs);
  const auto trace = shape_trace(input, specs);
  Rng rng(seed);
  layers_.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    Layer<Real> layer{specs[i], {}, {}, trace[i], trace[i + 1]};
    std::size_t fan_in = 0;
    if (specs[i].kind == LayerKind::Conv2D) {
      const std::size_t c = trace[i][0];
      layer.weights = Tensor<Real>({specs[i].out_channels, c, specs[i].kernel_h, specs[i].kernel_w});
      layer.bias = Tensor<Real>({specs[i].out_channels});
      fan_in = c * specs[i].kernel_h * specs[i].kernel_w;
    } else if (specs[i].kind == LayerKind::Dense) {
      const std::size_t in = shape_size(trace[i]);
      layer.weights = Tensor<Real>({specs[i].out_units, in});
      layer.bias = Tensor<Real>({specs[i].out_units});
      fan_in = in;
    }
    if (fan_in > 0) {
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
      for (auto& w : layer.weights.vec()) w = static_cast<Real>(rng.uniform(-limit, limit));
    }
    layers_.push_back(std::move(layer));
  }
  derive_shapes();
}

template <typename Real>
BasicModel<Real> BasicModel<Real>::from_layers(InputShape input, std::vector<Layer<Real>> layers) {
  BasicModel m;
  m.input_ = input;
  m.layers_ = std::move(layers);
  std::vector<LayerSpec> specs;
  for (const auto& l : m.layers_) specs.push_back(l.spec);
  check_stack(specs);
  m.derive_shapes();
  return m;
}

template <typename Real>
void BasicModel<Real>::derive_shapes() {
  Shape cur = input_.shape();
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    auto& l = layers_[i];
    const std::string where = "layer " + std::to_string(i);
    if (l.spec.kind == LayerKind::Conv2D) {
      require(l.weights.shape() ==
                  Shape{l.spec.out_channels, cur.at(0), l.spec.kernel_h, l.spec.kernel_w},
              where + ": conv weights " + shape_str(l.weights.shape()) + " inconsistent with input " +
                  shape_str(cur));
      require(l.bias.shape() == Shape{l.spec.out_channels}, where + ": conv bias shape");
    } else if (l.spec.kind == LayerKind::Dense) {
      require(l.weights.shape() == Shape{l.spec.out_units, shape_size(cur)},
              where + ": dense weights " + shape_str(l.weights.shape()) +
                  " inconsistent with input " + shape_str(cur));
      require(l.bias.shape() == Shape{l.spec.out_units}, where + ": dense bias shape");
    } else {
      require(l.weights.empty() && l.bias.empty(), where + ": layer kind takes no parameters");
    }
    l.in_shape = cur;
    cur = next_shape(cur, l.spec, i);
    l.out_shape = cur;
  }
  n_classes_ = shape_size(cur);
}

template <typename Real>
std::size_t BasicModel<Real>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

template <typename Real>
Tensor<Real> BasicModel<Real>::logits(const Tensor<Real>& input) const {
  require(input.shape() == input_.shape(), "model input shape " + shape_str(input.shape()) +
                                               " does not match " + shape_str(input_.shape()));
  Tensor<Real> x = input;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) x = apply_layer(layers_[i], x);
  return x;
}

template <typename Real>
ScoreVector BasicModel<Real>::forward(const Tensor<Real>& input) const {
  // Normalized in double so the scores sum to 1 well inside the 1e-6 tolerance.
  const Tensor<double> probs = softmax(logits(input).template cast<double>());
  return probs.vec();
}

template class BasicModel<float>;
template class BasicModel<double>;

std::vector<LayerSpec> gaze_net_layers(std::size_t n_classes) {
  return {LayerSpec::conv(24, 7, 7), LayerSpec::relu(),      LayerSpec::maxpool2(),
          LayerSpec::conv(24, 5, 5), LayerSpec::relu(),      LayerSpec::maxpool2(),
          LayerSpec::conv(24, 3, 3), LayerSpec::relu(),      LayerSpec::maxpool2(),
          LayerSpec::dense(n_classes), LayerSpec::softmax_ce()};
}

Model build_gaze_net(std::size_t input_h, std::size_t input_w, std::size_t n_classes,
                     std::uint64_t seed) {
  require(input_h >= 8 && input_w >= 8,
          "gaze net input " + std::to_string(input_h) + "x" + std::to_string(input_w) +
              " is too small for three 2x2 pooling stages (need at least 8x8)");
  require(n_classes >= 1, "n_classes must be positive");
  return Model(InputShape{1, input_h, input_w}, gaze_net_layers(n_classes), seed);
}

}  // namespace gazenet
