#include "gazenet/train.hpp"

#include <numeric>

#include "gazenet/error.hpp"
#include "gazenet/fusion.hpp"
#include "gazenet/layers.hpp"
#include "gazenet/rng.hpp"

namespace gazenet {

template <typename Real>
Gradients<Real> Gradients<Real>::zeros_like(const BasicModel<Real>& model) {
  Gradients g;
  for (const auto& l : model.layers()) {
    g.weights.push_back(l.has_params() ? Tensor<Real>(l.weights.shape()) : Tensor<Real>());
    g.bias.push_back(l.has_params() ? Tensor<Real>(l.bias.shape()) : Tensor<Real>());
  }
  return g;
}

template <typename Real>
void Gradients<Real>::zero() {
  for (auto& t : weights) t.fill(Real(0));
  for (auto& t : bias) t.fill(Real(0));
}

template <typename Real>
void Gradients<Real>::scale(Real factor) {
  for (auto& t : weights)
    for (auto& v : t.vec()) v *= factor;
  for (auto& t : bias)
    for (auto& v : t.vec()) v *= factor;
}

template <typename Real>
void forward_trace(const BasicModel<Real>& model, const Tensor<Real>& input,
                   ForwardTrace<Real>& trace, std::size_t from_layer) {
  const auto& layers = model.layers();
  require(from_layer < layers.size(), "forward_trace: start layer out of range");
  if (from_layer == 0) {
    require(input.shape() == model.input_shape().shape(),
            "model input shape " + shape_str(input.shape()) + " does not match " +
                shape_str(model.input_shape().shape()));
    trace.inputs.resize(layers.size());
    trace.argmax.resize(layers.size());
    trace.inputs[0] = input;
  } else {
    require(trace.inputs.size() == layers.size(), "forward_trace: trace not initialized");
  }
  // The SoftmaxCE layer's input is the logit vector.
  for (std::size_t i = from_layer; i + 1 < layers.size(); ++i) {
    const auto& l = layers[i];
    const auto& x = trace.inputs[i];
    switch (l.spec.kind) {
      case LayerKind::Conv2D: trace.inputs[i + 1] = conv2d_forward(x, l.weights, l.bias); break;
      case LayerKind::ReLU: trace.inputs[i + 1] = relu_forward(x); break;
      case LayerKind::MaxPool2: {
        auto r = maxpool2_forward(x);
        trace.inputs[i + 1] = std::move(r.output);
        trace.argmax[i] = std::move(r.argmax);
        break;
      }
      case LayerKind::Dense: trace.inputs[i + 1] = dense_forward(x, l.weights, l.bias); break;
      case LayerKind::SoftmaxCE: fail("SoftmaxCE may only be the final layer");
    }
  }
  trace.logits = trace.inputs.back();
}

template <typename Real>
double accumulate_gradients(const BasicModel<Real>& model, const Example<Real>& example,
                            ForwardTrace<Real>& trace, Gradients<Real>& grads) {
  forward_trace(model, example.input, trace);
  const auto ce = softmax_ce(trace.logits, example.label);
  const auto& layers = model.layers();
  Tensor<Real> g = ce.grad_logits;
  for (std::size_t i = layers.size() - 1; i-- > 0;) {
    const auto& l = layers[i];
    const auto& x = trace.inputs[i];
    switch (l.spec.kind) {
      case LayerKind::Conv2D: {
        if (i == 0) {
          conv2d_backward_accumulate<Real>(g, x, l.weights, nullptr, grads.weights[i], grads.bias[i]);
        } else {
          Tensor<Real> gin(x.shape());
          conv2d_backward_accumulate<Real>(g, x, l.weights, &gin, grads.weights[i], grads.bias[i]);
          g = std::move(gin);
        }
        break;
      }
      case LayerKind::ReLU: g = relu_backward(g, x); break;
      case LayerKind::MaxPool2: g = maxpool2_backward(g, trace.argmax[i], x.shape()); break;
      case LayerKind::Dense: {
        Tensor<Real> gin(x.shape());
        dense_backward_accumulate<Real>(g, x, l.weights, i == 0 ? nullptr : &gin, grads.weights[i],
                                        grads.bias[i]);
        g = std::move(gin);
        break;
      }
      case LayerKind::SoftmaxCE: fail("SoftmaxCE may only be the final layer");
    }
  }
  return ce.loss;
}

template <typename Real>
double example_loss(const BasicModel<Real>& model, const Example<Real>& example) {
  return softmax_ce(model.logits(example.input), example.label).loss;
}

template <typename Real>
void sgd_step(BasicModel<Real>& model, const Gradients<Real>& grads, double lr) {
  auto& layers = model.layers();
  require(grads.weights.size() == layers.size() && grads.bias.size() == layers.size(),
          "sgd_step: gradient set does not match model");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].has_params()) continue;
    sgd_step(layers[i].weights, grads.weights[i], lr);
    sgd_step(layers[i].bias, grads.bias[i], lr);
  }
}

double mean_loss(const Model& model, std::span<const Example<float>> examples) {
  require(!examples.empty(), "mean_loss: empty dataset");
  double sum = 0.0;
  for (const auto& e : examples) sum += example_loss(model, e);
  return sum / static_cast<double>(examples.size());
}

double train_epoch(Model& model, std::span<const Example<float>> examples, double lr,
                   std::size_t batch_size, std::uint64_t seed) {
  require(!examples.empty(), "train_epoch: empty dataset");
  require(lr >= 0.0, "train_epoch: learning rate must be non-negative");
  require(batch_size >= 1, "train_epoch: batch size must be positive");
  for (const auto& e : examples)
    require(e.label < model.n_classes(), "train_epoch: label " + std::to_string(e.label) +
                                             " out of range for " +
                                             std::to_string(model.n_classes()) + " classes");

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  auto grads = Gradients<float>::zeros_like(model);
  ForwardTrace<float> trace;
  double total = 0.0;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    grads.zero();
    for (std::size_t k = start; k < end; ++k)
      total += accumulate_gradients(model, examples[order[k]], trace, grads);
    if (lr > 0.0) {
      grads.scale(1.0f / static_cast<float>(end - start));
      sgd_step(model, grads, lr);
    }
  }
  return total / static_cast<double>(examples.size());
}

double training_accuracy(const Model& model, std::span<const Example<float>> examples) {
  require(!examples.empty(), "training_accuracy: empty dataset");
  std::size_t hits = 0;
  for (const auto& e : examples)
    if (predict_class(model.forward(e.input)) == e.label) ++hits;
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

#define GAZENET_INSTANTIATE_TRAIN(R)                                                        \
  template struct Gradients<R>;                                                             \
  template void forward_trace(const BasicModel<R>&, const Tensor<R>&, ForwardTrace<R>&,     \
                              std::size_t);                                                 \
  template double accumulate_gradients(const BasicModel<R>&, const Example<R>&,             \
                                       ForwardTrace<R>&, Gradients<R>&);                    \
  template double example_loss(const BasicModel<R>&, const Example<R>&);                    \
  template void sgd_step(BasicModel<R>&, const Gradients<R>&, double);

GAZENET_INSTANTIATE_TRAIN(float)
GAZENET_INSTANTIATE_TRAIN(double)

}  // namespace gazenet
