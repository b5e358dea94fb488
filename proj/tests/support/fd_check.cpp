//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "support/fd_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace targen::testsupport {

std::vector<num::Tensor> finite_diff(
    const std::function<double(const std::vector<num::Tensor>&)>& f,
    std::vector<num::Tensor> at, double h) {
  std::vector<num::Tensor> grads;
  grads.reserve(at.size());
  for (std::size_t p = 0; p < at.size(); ++p) {
    num::Tensor g(at[p].shape());
    for (std::int64_t i = 0; i < at[p].numel(); ++i) {
      const double orig = at[p][i];
      at[p][i] = orig + h;
      const double fp = f(at);
      at[p][i] = orig - h;
      const double fm = f(at);
      at[p][i] = orig;
      g[i] = (fp - fm) / (2.0 * h);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

double max_rel_err(const std::vector<num::Tensor>& a,
                   const std::vector<num::Tensor>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  double worst = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a[p].numel() != b[p].numel()) throw std::invalid_argument("numel mismatch");
    for (std::int64_t i = 0; i < a[p].numel(); ++i) {
      const double denom = std::max({1.0, std::fabs(a[p][i]), std::fabs(b[p][i])});
      worst = std::max(worst, std::fabs(a[p][i] - b[p][i]) / denom);
    }
  }
  return worst;
}

}  // namespace targen::testsupport
