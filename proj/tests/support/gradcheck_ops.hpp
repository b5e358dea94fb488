//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_TESTS_SUPPORT_GRADCHECK_OPS_HPP_
#define TARGEN_TESTS_SUPPORT_GRADCHECK_OPS_HPP_

#include <string>
#include <vector>

namespace targen::testsupport {

struct OpGradReport {
  std::string op;
  double max_rel_err = 0.0;
};

// Central finite-difference check (h = 1e-5) of every differentiable tape op
// against reverse-mode gradients, `instances` random instances per op.
// Returns per-op worst relative error.
std::vector<OpGradReport> run_op_gradchecks(int instances, std::uint64_t seed);

}  // namespace targen::testsupport

#endif  // TARGEN_TESTS_SUPPORT_GRADCHECK_OPS_HPP_
