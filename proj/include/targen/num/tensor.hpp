//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_NUM_TENSOR_HPP_
#define TARGEN_NUM_TENSOR_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace targen::num {

using Shape = std::vector<std::int64_t>;

std::string shape_str(std::span<const std::int64_t> s);

// Dense row-major f64 array. Plain value type; all tape ops copy or move.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
  static Tensor full(Shape shape, double v);
  static Tensor scalar(double v) { return full({1}, v); }
  // iid N(0, 1) entries.
  static Tensor randn(Shape shape, std::mt19937_64& rng);

  const Shape& shape() const noexcept { return shape_; }
  std::int64_t numel() const noexcept {
    return static_cast<std::int64_t>(data_.size());
  }
  std::int64_t rank() const noexcept {
    return static_cast<std::int64_t>(shape_.size());
  }
  std::int64_t dim(std::int64_t i) const { return shape_[static_cast<std::size_t>(i)]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<const double> span() const { return data_; }
  std::span<double> span() { return data_; }

  double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  bool all_finite() const;
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

private:
  Shape shape_;
  std::vector<double> data_;
};

std::int64_t numel_of(std::span<const std::int64_t> shape);

}  // namespace targen::num

#endif  // TARGEN_NUM_TENSOR_HPP_
