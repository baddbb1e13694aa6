#include "gazenet/layers.hpp"

#include <algorithm>
#include <cmath>

#include "gazenet/error.hpp"

namespace gazenet {

namespace {

template <typename Real>
void check_same_shape(const Tensor<Real>& a, const Tensor<Real>& b, const char* what) {
  require(a.shape() == b.shape(), std::string(what) + ": shape mismatch " + shape_str(a.shape()) +
                                      " vs " + shape_str(b.shape()));
}

template <typename Real>
void check_conv_args(const Tensor<Real>& input, const Tensor<Real>& weights) {
  require(input.rank() == 3, "conv2d: input must be [C,H,W], got " + shape_str(input.shape()));
  require(weights.rank() == 4,
          "conv2d: weights must be [O,C,kh,kw], got " + shape_str(weights.shape()));
  require(weights.dim(1) == input.dim(0),
          "conv2d: weights expect " + std::to_string(weights.dim(1)) + " input channels, got " +
              std::to_string(input.dim(0)));
  require(weights.dim(2) % 2 == 1 && weights.dim(3) % 2 == 1,
          "conv2d: kernel dimensions must be odd, got " + shape_str(weights.shape()));
}

// Valid output index range [lo, hi) for a kernel tap at offset d over extent n.
inline void tap_range(std::ptrdiff_t d, std::size_t n, std::size_t& lo, std::size_t& hi) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, -d));
  hi = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, std::min(sn, sn - d)));
}

}  // namespace

template <typename Real>
Tensor<Real> relu_forward(const Tensor<Real>& x) {
  Tensor<Real> out = x;
  for (auto& v : out.vec()) v = v > Real(0) ? v : Real(0);
  return out;
}

template <typename Real>
Tensor<Real> relu_backward(const Tensor<Real>& upstream, const Tensor<Real>& cached_input) {
  check_same_shape(upstream, cached_input, "relu_backward");
  Tensor<Real> grad = upstream;
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (!(cached_input[i] > Real(0))) grad[i] = Real(0);
  return grad;
}

template <typename Real>
Tensor<Real> conv2d_forward(const Tensor<Real>& input, const Tensor<Real>& weights,
                            const Tensor<Real>& bias) {
  check_conv_args(input, weights);
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  const std::size_t O = weights.dim(0), KH = weights.dim(2), KW = weights.dim(3);
  require(bias.size() == O, "conv2d: bias length must equal output channels");
  const auto ph = static_cast<std::ptrdiff_t>(KH / 2);
  const auto pw = static_cast<std::ptrdiff_t>(KW / 2);

  Tensor<Real> out({O, H, W});
  const Real* in = input.data().data();
  const Real* wt = weights.data().data();
  Real* dst = out.data().data();
  for (std::size_t o = 0; o < O; ++o) {
    std::fill(dst + o * H * W, dst + (o + 1) * H * W, bias[o]);
    for (std::size_t c = 0; c < C; ++c) {
      const Real* plane = in + c * H * W;
      for (std::size_t u = 0; u < KH; ++u) {
        const std::ptrdiff_t di = static_cast<std::ptrdiff_t>(u) - ph;
        std::size_t ilo = 0, ihi = 0;
        tap_range(di, H, ilo, ihi);
        for (std::size_t v = 0; v < KW; ++v) {
          const std::ptrdiff_t dj = static_cast<std::ptrdiff_t>(v) - pw;
          std::size_t jlo = 0, jhi = 0;
          tap_range(dj, W, jlo, jhi);
          const Real w = wt[((o * C + c) * KH + u) * KW + v];
          for (std::size_t i = ilo; i < ihi; ++i) {
            Real* orow = dst + (o * H + i) * W;
            const Real* irow = plane + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + di) * W;
            for (std::size_t j = jlo; j < jhi; ++j)
              orow[j] += w * irow[static_cast<std::ptrdiff_t>(j) + dj];
          }
        }
      }
    }
  }
  return out;
}

template <typename Real>
void conv2d_backward_accumulate(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                                const Tensor<Real>& weights, Tensor<Real>* grad_input,
                                Tensor<Real>& grad_weights, Tensor<Real>& grad_bias) {
  check_conv_args(cached_input, weights);
  const std::size_t C = cached_input.dim(0), H = cached_input.dim(1), W = cached_input.dim(2);
  const std::size_t O = weights.dim(0), KH = weights.dim(2), KW = weights.dim(3);
  require(upstream.shape() == Shape{O, H, W},
          "conv2d_backward: upstream shape " + shape_str(upstream.shape()) +
              " does not match forward output " + shape_str(Shape{O, H, W}));
  require(grad_weights.shape() == weights.shape(), "conv2d_backward: grad_weights shape");
  require(grad_bias.size() == O, "conv2d_backward: grad_bias shape");
  if (grad_input)
    require(grad_input->shape() == cached_input.shape(), "conv2d_backward: grad_input shape");
  const auto ph = static_cast<std::ptrdiff_t>(KH / 2);
  const auto pw = static_cast<std::ptrdiff_t>(KW / 2);

  const Real* up = upstream.data().data();
  const Real* in = cached_input.data().data();
  const Real* wt = weights.data().data();
  Real* gw = grad_weights.data().data();
  Real* gin = grad_input ? grad_input->data().data() : nullptr;

  for (std::size_t o = 0; o < O; ++o) {
    Real bsum = 0;
    for (std::size_t k = 0; k < H * W; ++k) bsum += up[o * H * W + k];
    grad_bias[o] += bsum;
    for (std::size_t c = 0; c < C; ++c) {
      const Real* plane = in + c * H * W;
      Real* gplane = gin ? gin + c * H * W : nullptr;
      for (std::size_t u = 0; u < KH; ++u) {
        const std::ptrdiff_t di = static_cast<std::ptrdiff_t>(u) - ph;
        std::size_t ilo = 0, ihi = 0;
        tap_range(di, H, ilo, ihi);
        for (std::size_t v = 0; v < KW; ++v) {
          const std::ptrdiff_t dj = static_cast<std::ptrdiff_t>(v) - pw;
          std::size_t jlo = 0, jhi = 0;
          tap_range(dj, W, jlo, jhi);
          const std::size_t widx = ((o * C + c) * KH + u) * KW + v;
          const Real w = wt[widx];
          Real acc = 0;
          for (std::size_t i = ilo; i < ihi; ++i) {
            const Real* urow = up + (o * H + i) * W;
            const std::size_t src = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + di) * W;
            const Real* irow = plane + src;
            for (std::size_t j = jlo; j < jhi; ++j)
              acc += urow[j] * irow[static_cast<std::ptrdiff_t>(j) + dj];
            if (gplane) {
              Real* grow = gplane + src;
              for (std::size_t j = jlo; j < jhi; ++j)
                grow[static_cast<std::ptrdiff_t>(j) + dj] += w * urow[j];
            }
          }
          gw[widx] += acc;
        }
      }
    }
  }
}

template <typename Real>
ConvGrads<Real> conv2d_backward(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                                const Tensor<Real>& weights) {
  check_conv_args(cached_input, weights);
  ConvGrads<Real> g{Tensor<Real>(cached_input.shape()), Tensor<Real>(weights.shape()),
                    Tensor<Real>({weights.dim(0)})};
  conv2d_backward_accumulate(upstream, cached_input, weights, &g.input, g.weights, g.bias);
  return g;
}

template <typename Real>
PoolResult<Real> maxpool2_forward(const Tensor<Real>& input) {
  require(input.rank() == 3, "maxpool2: input must be [C,H,W], got " + shape_str(input.shape()));
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  require(H >= 2 && W >= 2, "maxpool2: spatial dims must be >= 2, got " + shape_str(input.shape()));
  const std::size_t OH = H / 2, OW = W / 2;
  PoolResult<Real> r{Tensor<Real>({C, OH, OW}), {}};
  r.argmax.resize(C * OH * OW);
  std::size_t k = 0;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t i = 0; i < OH; ++i) {
      for (std::size_t j = 0; j < OW; ++j, ++k) {
        const std::size_t base = (c * H + 2 * i) * W + 2 * j;
        // Row-major scan of the window; strict > keeps the first maximum.
        const std::size_t cand[4] = {base, base + 1, base + W, base + W + 1};
        std::size_t best = cand[0];
        for (std::size_t q = 1; q < 4; ++q)
          if (input[cand[q]] > input[best]) best = cand[q];
        r.output[k] = input[best];
        r.argmax[k] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return r;
}

template <typename Real>
Tensor<Real> maxpool2_backward(const Tensor<Real>& upstream,
                               const std::vector<std::uint32_t>& argmax,
                               const Shape& input_shape) {
  require(input_shape.size() == 3, "maxpool2_backward: input shape must be [C,H,W]");
  const Shape expect{input_shape[0], input_shape[1] / 2, input_shape[2] / 2};
  require(upstream.shape() == expect && argmax.size() == upstream.size(),
          "maxpool2_backward: stale argmax or upstream shape " + shape_str(upstream.shape()) +
              " for input " + shape_str(input_shape));
  Tensor<Real> grad(input_shape);
  const std::size_t n = grad.size();
  for (std::size_t k = 0; k < argmax.size(); ++k) {
    require(argmax[k] < n, "maxpool2_backward: argmax index out of range");
    grad[argmax[k]] += upstream[k];
  }
  return grad;
}

template <typename Real>
Tensor<Real> dense_forward(const Tensor<Real>& input, const Tensor<Real>& weights,
                           const Tensor<Real>& bias) {
  require(weights.rank() == 2, "dense: weights must be [out,in]");
  const std::size_t out_n = weights.dim(0), in_n = weights.dim(1);
  require(input.size() == in_n, "dense: input length " + std::to_string(input.size()) +
                                    " does not match weights " + shape_str(weights.shape()));
  require(bias.size() == out_n, "dense: bias length must equal output units");
  Tensor<Real> out({out_n});
  const Real* x = input.data().data();
  for (std::size_t k = 0; k < out_n; ++k) {
    const Real* row = weights.data().data() + k * in_n;
    Real acc = 0;
    for (std::size_t i = 0; i < in_n; ++i) acc += row[i] * x[i];
    out[k] = acc + bias[k];
  }
  return out;
}

template <typename Real>
void dense_backward_accumulate(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                               const Tensor<Real>& weights, Tensor<Real>* grad_input,
                               Tensor<Real>& grad_weights, Tensor<Real>& grad_bias) {
  require(weights.rank() == 2, "dense_backward: weights must be [out,in]");
  const std::size_t out_n = weights.dim(0), in_n = weights.dim(1);
  require(upstream.size() == out_n && cached_input.size() == in_n,
          "dense_backward: dimension mismatch");
  require(grad_weights.shape() == weights.shape() && grad_bias.size() == out_n,
          "dense_backward: gradient buffer shape");
  if (grad_input) require(grad_input->size() == in_n, "dense_backward: grad_input shape");
  const Real* x = cached_input.data().data();
  for (std::size_t k = 0; k < out_n; ++k) {
    const Real g = upstream[k];
    grad_bias[k] += g;
    Real* grow = grad_weights.data().data() + k * in_n;
    for (std::size_t i = 0; i < in_n; ++i) grow[i] += g * x[i];
    if (grad_input) {
      const Real* wrow = weights.data().data() + k * in_n;
      Real* gx = grad_input->data().data();
      for (std::size_t i = 0; i < in_n; ++i) gx[i] += g * wrow[i];
    }
  }
}

template <typename Real>
DenseGrads<Real> dense_backward(const Tensor<Real>& upstream, const Tensor<Real>& cached_input,
                                const Tensor<Real>& weights) {
  require(weights.rank() == 2, "dense_backward: weights must be [out,in]");
  DenseGrads<Real> g{Tensor<Real>(cached_input.shape()), Tensor<Real>(weights.shape()),
                     Tensor<Real>({weights.dim(0)})};
  dense_backward_accumulate(upstream, cached_input, weights, &g.input, g.weights, g.bias);
  return g;
}

template <typename Real>
Tensor<Real> softmax(const Tensor<Real>& logits) {
  require(!logits.empty(), "softmax: empty logits");
  double mx = logits[0];
  for (auto v : logits.data()) mx = std::max<double>(mx, v);
  std::vector<double> e(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = std::exp(static_cast<double>(logits[i]) - mx);
    sum += e[i];
  }
  Tensor<Real> probs({logits.size()});
  for (std::size_t i = 0; i < e.size(); ++i) probs[i] = static_cast<Real>(e[i] / sum);
  return probs;
}

template <typename Real>
SoftmaxResult<Real> softmax_ce(const Tensor<Real>& logits, std::size_t true_class) {
  require(true_class < logits.size(), "softmax_ce: class index " + std::to_string(true_class) +
                                          " out of range for " + std::to_string(logits.size()) +
                                          " classes");
  double mx = logits[0];
  for (auto v : logits.data()) mx = std::max<double>(mx, v);
  double sum = 0.0;
  for (auto v : logits.data()) sum += std::exp(static_cast<double>(v) - mx);
  const double log_sum = std::log(sum);

  SoftmaxResult<Real> r;
  r.loss = log_sum - (static_cast<double>(logits[true_class]) - mx);
  r.probs = Tensor<Real>({logits.size()});
  r.grad_logits = Tensor<Real>({logits.size()});
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double p = std::exp(static_cast<double>(logits[i]) - mx - log_sum);
    r.probs[i] = static_cast<Real>(p);
    r.grad_logits[i] = static_cast<Real>(p - (i == true_class ? 1.0 : 0.0));
  }
  return r;
}

template <typename Real>
void sgd_step(Tensor<Real>& param, const Tensor<Real>& grad, double lr) {
  require(lr > 0.0, "sgd_step: learning rate must be positive");
  require(param.shape() == grad.shape(), "sgd_step: parameter/gradient shape mismatch " +
                                             shape_str(param.shape()) + " vs " +
                                             shape_str(grad.shape()));
  const Real step = static_cast<Real>(lr);
  for (std::size_t i = 0; i < param.size(); ++i) param[i] -= step * grad[i];
}

#define GAZENET_INSTANTIATE_LAYERS(R)                                                          \
  template Tensor<R> relu_forward(const Tensor<R>&);                                           \
  template Tensor<R> relu_backward(const Tensor<R>&, const Tensor<R>&);                        \
  template Tensor<R> conv2d_forward(const Tensor<R>&, const Tensor<R>&, const Tensor<R>&);     \
  template ConvGrads<R> conv2d_backward(const Tensor<R>&, const Tensor<R>&, const Tensor<R>&); \
  template void conv2d_backward_accumulate(const Tensor<R>&, const Tensor<R>&,                 \
                                           const Tensor<R>&, Tensor<R>*, Tensor<R>&,           \
                                           Tensor<R>&);                                        \
  template PoolResult<R> maxpool2_forward(const Tensor<R>&);                                   \
  template Tensor<R> maxpool2_backward(const Tensor<R>&, const std::vector<std::uint32_t>&,    \
                                       const Shape&);                                          \
  template Tensor<R> dense_forward(const Tensor<R>&, const Tensor<R>&, const Tensor<R>&);      \
  template DenseGrads<R> dense_backward(const Tensor<R>&, const Tensor<R>&, const Tensor<R>&); \
  template void dense_backward_accumulate(const Tensor<R>&, const Tensor<R>&,                  \
                                          const Tensor<R>&, Tensor<R>*, Tensor<R>&,            \
                                          Tensor<R>&);                                         \
  template Tensor<R> softmax(const Tensor<R>&);                                                \
  template SoftmaxResult<R> softmax_ce(const Tensor<R>&, std::size_t);                         \
  template void sgd_step(Tensor<R>&, const Tensor<R>&, double);

GAZENET_INSTANTIATE_LAYERS(float)
GAZENET_INSTANTIATE_LAYERS(double)

}  // namespace gazenet
