#pragma once

#include <cstdint>
#include <vector>

#include "gazenet/tensor.hpp"

namespace gazenet {

// Layer primitives. Every function checks its shape contract and throws
// ValidationError on mismatch.

template <typename Real>
Tensor<Real> relu_forward(const Tensor<Real>& x);

// Subgradient at exactly zero is zero.
template <typename Real>
Tensor<Real> relu_backward(const Tensor<Real>& upstream, const Tensor<Real>& cached_input);

// Stride 1, zero "same" padding. input [C,H,W], weights [O,C,kh,kw] with odd
// kernel dims, bias [O]. Output [O,H,W].
template <typename Real>
Tensor<Real> conv2d_forward(const Tensor<Real>& input, const Tensor<Real>& weights,
                            const Tensor<Real>& bias);

template <typename Real>
struct ConvGrads {
  Tensor<Real> input;
  Tensor<Real> weights;
  Tensor<Real> bias;
};

template <typename Real>
ConvGrads<Real> conv2d_backward(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                                const Tensor<Real>& weights);

// Accumulating form used by the training loop. grad_input may be null when
// the input gradient is not needed (first layer).
template <typename Real>
void conv2d_backward_accumulate(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                                const Tensor<Real>& weights, Tensor<Real>* grad_input,
                                Tensor<Real>& grad_weights, Tensor<Real>& grad_bias);

template <typename Real>
struct PoolResult {
  Tensor<Real> output;
  // Flat index into the input for each output element.
  std::vector<std::uint32_t> argmax;
};

// Non-overlapping 2x2 max pooling. Odd trailing rows/columns are dropped and
// ties resolve to the first element in row-major order.
template <typename Real>
PoolResult<Real> maxpool2_forward(const Tensor<Real>& input);

template <typename Real>
Tensor<Real> maxpool2_backward(const Tensor<Real>& upstream,
                               const std::vector<std::uint32_t>& argmax,
                               const Shape& input_shape);

// The input is flattened; weights are [out, in].
template <typename Real>
Tensor<Real> dense_forward(const Tensor<Real>& input, const Tensor<Real>& weights,
                           const Tensor<Real>& bias);

template <typename Real>
struct DenseGrads {
  Tensor<Real> input;  // same shape as the forward input
  Tensor<Real> weights;
  Tensor<Real> bias;
};

template <typename Real>
DenseGrads<Real> dense_backward(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                                const Tensor<Real>& weights);

template <typename Real>
void dense_backward_accumulate(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                               const Tensor<Real>& weights, Tensor<Real>* grad_input,
                               Tensor<Real>& grad_weights, Tensor<Real>& grad_bias);

template <typename Real>
struct SoftmaxResult {
  double loss = 0.0;
  Tensor<Real> probs;
  Tensor<Real> grad_logits;
};

// Max-shifted softmax followed by cross entropy against true_class.
template <typename Real>
SoftmaxResult<Real> softmax_ce(const Tensor<Real>& logits, std::size_t true_class);

// Probabilities only.
template <typename Real>
Tensor<Real> softmax(const Tensor<Real>& logits);

// param <- param - lr * grad. Plain SGD.
template <typename Real>
void sgd_step(Tensor<Real>& param, const Tensor<Real>& grad, double lr);

}  // namespace gazenet
