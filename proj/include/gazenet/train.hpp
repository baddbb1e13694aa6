#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gazenet/model.hpp"

namespace gazenet {

template <typename Real>
struct Example {
  Tensor<Real> input;
  std::size_t label = 0;
};

// Parameter gradients laid out parallel to model.layers(); empty tensors for
// parameterless layers.
template <typename Real>
struct Gradients {
  std::vector<Tensor<Real>> weights;
  std::vector<Tensor<Real>> bias;

  static Gradients zeros_like(const BasicModel<Real>& model);
  void zero();
  void scale(Real factor);
};

// Layer inputs recorded during a forward pass, plus pooling argmax.
template <typename Real>
struct ForwardTrace {
  std::vector<Tensor<Real>> inputs;
  std::vector<std::vector<std::uint32_t>> argmax;
  Tensor<Real> logits;
};

// Runs layers [from_layer, end-of-stack) using trace.inputs[from_layer] as
// the starting activation and records the rest. from_layer == 0 starts from
// input.
template <typename Real>
void forward_trace(const BasicModel<Real>& model, const Tensor<Real>& input,
                   ForwardTrace<Real>& trace, std::size_t from_layer = 0);

// Forward, loss, and backward for one example. Gradients are added to grads.
template <typename Real>
double accumulate_gradients(const BasicModel<Real>& model, const Example<Real>& example,
                            ForwardTrace<Real>& trace, Gradients<Real>& grads);

template <typename Real>
double example_loss(const BasicModel<Real>& model, const Example<Real>& example);

template <typename Real>
void sgd_step(BasicModel<Real>& model, const Gradients<Real>& grads, double lr);

// Mean cross-entropy over the examples without updating the model.
double mean_loss(const Model& model, std::span<const Example<float>> examples);

// One pass over the shuffled examples with minibatch SGD (gradient averaged
// over each batch). Returns the mean per-example loss seen during the epoch.
double train_epoch(Model& model, std::span<const Example<float>> examples, double lr,
                   std::size_t batch_size, std::uint64_t seed);

double training_accuracy(const Model& model, std::span<const Example<float>> examples);

}  // namespace gazenet
