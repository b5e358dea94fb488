//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/num/tensor.hpp"

#include <cmath>
#include <sstream>

#include "targen/errors.hpp"

namespace targen::num {

std::int64_t numel_of(std::span<const std::int64_t> shape) {
  std::int64_t n = 1;
  for (std::int64_t d : shape) {
    if (d < 0) throw ShapeMismatch("negative dimension");
    n *= d;
  }
  return n;
}

std::string shape_str(std::span<const std::int64_t> s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  data_.assign(static_cast<std::size_t>(numel_of(shape_)), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (numel_of(shape_) != static_cast<std::int64_t>(data_.size()))
    throw ShapeMismatch("data length " + std::to_string(data_.size()) +
                        " does not match shape " + shape_str(shape_));
}

Tensor Tensor::full(Shape shape, double v) {
  Tensor t(std::move(shape));
  for (double& x : t.data_) x = v;
  return t;
}

Tensor Tensor::randn(Shape shape, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> nd(0.0, 1.0);
  for (double& x : t.data_) x = nd(rng);
  return t;
}

bool Tensor::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace targen::num
