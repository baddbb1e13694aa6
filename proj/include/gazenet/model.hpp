#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gazenet/tensor.hpp"

namespace gazenet {

// Tag values are part of the model file format.
enum class LayerKind : std::uint8_t { Conv2D = 0, ReLU = 1, MaxPool2 = 2, Dense = 3, SoftmaxCE = 4 };

const char* layer_kind_name(LayerKind kind);

struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;
  std::size_t out_channels = 0;  // Conv2D
  std::size_t kernel_h = 0;      // Conv2D, odd
  std::size_t kernel_w = 0;      // Conv2D, odd
  std::size_t out_units = 0;     // Dense

  static LayerSpec conv(std::size_t out_channels, std::size_t kernel_h, std::size_t kernel_w) {
    return {LayerKind::Conv2D, out_channels, kernel_h, kernel_w, 0};
  }
  static LayerSpec relu() { return {LayerKind::ReLU}; }
  static LayerSpec maxpool2() { return {LayerKind::MaxPool2}; }
  static LayerSpec dense(std::size_t out_units) { return {LayerKind::Dense, 0, 0, 0, out_units}; }
  static LayerSpec softmax_ce() { return {LayerKind::SoftmaxCE}; }

  bool operator==(const LayerSpec&) const = default;
};

template <typename Real>
struct Layer {
  LayerSpec spec;
  Tensor<Real> weights;  // Conv2D: [O,C,kh,kw]; Dense: [out,in]; else empty
  Tensor<Real> bias;     // [O] / [out]; else empty
  Shape in_shape;
  Shape out_shape;

  bool has_params() const {
    return spec.kind == LayerKind::Conv2D || spec.kind == LayerKind::Dense;
  }
  bool operator==(const Layer&) const = default;
};

struct InputShape {
  std::size_t channels = 1;
  std::size_t height = 0;
  std::size_t width = 0;

  Shape shape() const { return {channels, height, width}; }
  bool operator==(const InputShape&) const = default;
};

// Per-class probabilities from one network or from fusion.
using ScoreVector = std::vector<double>;

// Ordered layer stack ending in SoftmaxCE. Parameters only: forward passes
// keep their intermediates outside the model, so a trained model can be
// shared read-only across threads.
template <typename Real>
class BasicModel {
public:
  BasicModel() = default;

  // Builds the stack and initializes weights uniformly in +-sqrt(6/fan_in),
  // biases zero.
  BasicModel(InputShape input, const std::vector<LayerSpec>& specs, std::uint64_t seed);

  // Adopts pre-filled layers (used by the loader). Shapes are re-derived and
  // checked against the parameter tensors.
  static BasicModel from_layers(InputShape input, std::vector<Layer<Real>> layers);

  const InputShape& input_shape() const { return input_; }
  std::size_t n_classes() const { return n_classes_; }
  const std::vector<Layer<Real>>& layers() const { return layers_; }
  std::vector<Layer<Real>>& layers() { return layers_; }
  std::size_t parameter_count() const;

  // Pre-softmax scores.
  Tensor<Real> logits(const Tensor<Real>& input) const;
  // Softmax probabilities.
  ScoreVector forward(const Tensor<Real>& input) const;

  template <typename Other>
  BasicModel<Other> cast() const {
    std::vector<Layer<Other>> out;
    out.reserve(layers_.size());
    for (const auto& l : layers_) {
      out.push_back({l.spec, l.weights.template cast<Other>(), l.bias.template cast<Other>(),
                     l.in_shape, l.out_shape});
    }
    return BasicModel<Other>::from_layers(input_, std::move(out));
  }

  bool operator==(const BasicModel&) const = default;

private:
  void derive_shapes();

  InputShape input_;
  std::vector<Layer<Real>> layers_;
  std::size_t n_classes_ = 0;
};

using Model = BasicModel<float>;
using ModelD = BasicModel<double>;

extern template class BasicModel<float>;
extern template class BasicModel<double>;

// Conv(24,7x7)-ReLU-Pool, Conv(24,5x5)-ReLU-Pool, Conv(24,3x3)-ReLU-Pool,
// Dense(n_classes), SoftmaxCE. Needs at least 8x8 input.
std::vector<LayerSpec> gaze_net_layers(std::size_t n_classes);
Model build_gaze_net(std::size_t input_h, std::size_t input_w, std::size_t n_classes,
                     std::uint64_t seed = 1);

// Output shape after every layer, starting with the input shape.
std::vector<Shape> shape_trace(const InputShape& input, const std::vector<LayerSpec>& specs);

// "GDN1" binary format, little-endian, f32 payload.
std::vector<std::uint8_t> encode_model(const Model& model);
Model decode_model(std::span<const std::uint8_t> bytes);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace gazenet
