#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gazenet/error.hpp"
#include "gazenet/model.hpp"

namespace gazenet {

namespace {

constexpr char kMagic[4] = {'G', 'D', 'N', '1'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void raw(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

private:
  std::vector<std::uint8_t> out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t pos() const { return pos_; }

private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n)
      fail("model file truncated at byte " + std::to_string(pos_));
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_tensor(Writer& w, const Tensor<float>& t) {
  w.u32(static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) w.u32(static_cast<std::uint32_t>(d));
  for (float v : t.data()) w.f32(v);
}

Tensor<float> read_tensor(Reader& r, std::size_t expected_rank) {
  const std::uint32_t rank = r.u32();
  require(rank == expected_rank, "model file: parameter rank " + std::to_string(rank) +
                                     ", expected " + std::to_string(expected_rank));
  Shape shape(rank);
  std::size_t n = 1;
  for (auto& d : shape) {
    d = r.u32();
    require(d > 0, "model file: zero tensor dimension");
    n *= d;
  }
  require(n <= r.remaining() / 4, "model file: tensor payload exceeds file size");
  std::vector<float> data(n);
  for (auto& v : data) v = r.f32();
  return Tensor<float>(std::move(shape), std::move(data));
}

}  // namespace

std::vector<std::uint8_t> encode_model(const Model& model) {
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(model.layers().size()));
  for (const auto& layer : model.layers()) {
    w.u8(static_cast<std::uint8_t>(layer.spec.kind));
    if (layer.has_params()) {
      write_tensor(w, layer.weights);
      write_tensor(w, layer.bias);
    }
  }
  w.u32(static_cast<std::uint32_t>(model.n_classes()));
  w.u32(static_cast<std::uint32_t>(model.input_shape().height));
  w.u32(static_cast<std::uint32_t>(model.input_shape().width));
  return w.take();
}

Model decode_model(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  require(std::memcmp(magic, kMagic, 4) == 0, "not a model file (bad magic)");
  const std::uint32_t version = r.u32();
  require(version == kFormatVersion,
          "unsupported model format version " + std::to_string(version));
  const std::uint32_t n_layers = r.u32();
  require(n_layers <= 4096, "model file: implausible layer count");

  std::vector<Layer<float>> layers;
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    const std::uint8_t tag = r.u8();
    require(tag <= static_cast<std::uint8_t>(LayerKind::SoftmaxCE),
            "model file: unknown layer tag " + std::to_string(tag));
    Layer<float> layer;
    layer.spec.kind = static_cast<LayerKind>(tag);
    if (layer.spec.kind == LayerKind::Conv2D) {
      layer.weights = read_tensor(r, 4);
      layer.bias = read_tensor(r, 1);
      layer.spec.out_channels = layer.weights.dim(0);
      layer.spec.kernel_h = layer.weights.dim(2);
      layer.spec.kernel_w = layer.weights.dim(3);
    } else if (layer.spec.kind == LayerKind::Dense) {
      layer.weights = read_tensor(r, 2);
      layer.bias = read_tensor(r, 1);
      layer.spec.out_units = layer.weights.dim(0);
    }
    layers.push_back(std::move(layer));
  }
  const std::uint32_t n_classes = r.u32();
  const std::uint32_t h = r.u32();
  const std::uint32_t w = r.u32();
  require(r.done(), "model file: " + std::to_string(r.remaining()) + " trailing bytes");

  Model m = Model::from_layers(InputShape{1, h, w}, std::move(layers));
  require(m.n_classes() == n_classes, "model file: declared n_classes " +
                                          std::to_string(n_classes) + " but network produces " +
                                          std::to_string(m.n_classes()));
  for (const auto& l : m.layers())
    require(l.weights.all_finite() && l.bias.all_finite(), "model file: non-finite weights");
  return m;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  const auto bytes = encode_model(model);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open model file for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing model file: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_model(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace gazenet
