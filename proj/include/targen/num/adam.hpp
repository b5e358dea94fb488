//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_NUM_ADAM_HPP_
#define TARGEN_NUM_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "targen/num/tensor.hpp"

namespace targen::num {

// Adam with bias correction; beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::vector<Tensor> m;  // first moments, aligned with parameter order
  std::vector<Tensor> v;  // second moments

  static AdamState init(std::span<const Tensor> params);
};

void adam_step(std::span<Tensor> params, std::span<const Tensor> grads,
               AdamState& state, double lr);

}  // namespace targen::num

#endif  // TARGEN_NUM_ADAM_HPP_
