#include "gazenet/tensor.hpp"

#include <cmath>
#include <sstream>

#include "gazenet/error.hpp"

namespace gazenet {

std::size_t shape_size(const Shape& shape) {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ')';
  return os.str();
}

template <typename Real>
Tensor<Real>::Tensor(Shape shape, Real fill) : shape_(std::move(shape)) {
  for (auto d : shape_) require(d > 0, "tensor dimensions must be positive: " + shape_str(shape_));
  data_.assign(shape_size(shape_), fill);
}

template <typename Real>
Tensor<Real>::Tensor(Shape shape, std::vector<Real> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (auto d : shape_) require(d > 0, "tensor dimensions must be positive: " + shape_str(shape_));
  require(data_.size() == shape_size(shape_),
          "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
              shape_str(shape_));
}

template <typename Real>
void Tensor<Real>::fill(Real v) {
  std::fill(data_.begin(), data_.end(), v);
}

template <typename Real>
void Tensor<Real>::reshape(Shape shape) {
  require(shape_size(shape) == data_.size(),
          "cannot reshape " + shape_str(shape_) + " to " + shape_str(shape));
  shape_ = std::move(shape);
}

template <typename Real>
bool Tensor<Real>::all_finite() const {
  for (auto v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

template class Tensor<float>;
template class Tensor<double>;

}  // namespace gazenet
