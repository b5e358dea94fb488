//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "support/gradcheck_ops.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "support/fd_check.hpp"
#include "targen/num/tape.hpp"

namespace targen::testsupport {
namespace {

using num::NodeId;
using num::Shape;
using num::Tape;
using num::Tensor;

// Builds a scalar loss from an op's output: weighted sum with fixed weights,
// so every output entry contributes to the gradient.
struct Case {
  std::string name;
  std::vector<Tensor> inputs;
  std::function<NodeId(Tape&, const std::vector<NodeId>&)> build;
};

Tensor rnd(Shape s, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> ud(lo, hi);
  Tensor t(std::move(s));
  for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = ud(rng);
  return t;
}

// Values bounded away from zero (relu kinks, div/sqrt domains).
Tensor rnd_off_zero(Shape s, std::mt19937_64& rng, double margin = 0.2) {
  Tensor t = rnd(std::move(s), rng);
  for (std::int64_t i = 0; i < t.numel(); ++i) {
    if (std::fabs(t[i]) < margin) t[i] = t[i] < 0 ? t[i] - margin : t[i] + margin;
  }
  return t;
}

std::vector<Case> make_cases(std::mt19937_64& rng) {
  std::vector<Case> cases;
  auto unary = [&](std::string name, Tensor in, auto fn) {
    cases.push_back({std::move(name), {std::move(in)},
                     [fn](Tape& t, const std::vector<NodeId>& xs) { return fn(t, xs[0]); }});
  };
  auto binary = [&](std::string name, Tensor a, Tensor b, auto fn) {
    cases.push_back({std::move(name), {std::move(a), std::move(b)},
                     [fn](Tape& t, const std::vector<NodeId>& xs) { return fn(t, xs[0], xs[1]); }});
  };

  binary("matmul_2x2", rnd({3, 4}, rng), rnd({4, 5}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::matmul(t, a, b);
  });
  binary("matmul_3x2", rnd({2, 3, 4}, rng), rnd({4, 5}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::matmul(t, a, b);
  });
  binary("matmul_3x3", rnd({2, 3, 4}, rng), rnd({2, 4, 5}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::matmul(t, a, b);
  });
  unary("transpose", rnd({2, 3, 4}, rng), [](Tape& t, NodeId a) { return num::transpose(t, a); });
  unary("swap_axes", rnd({2, 3, 4, 2}, rng), [](Tape& t, NodeId a) { return num::swap_axes(t, a, 1, 2); });
  unary("reshape", rnd({3, 4}, rng), [](Tape& t, NodeId a) { return num::reshape(t, a, {2, 6}); });
  binary("add", rnd({3, 4}, rng), rnd({3, 4}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::add(t, a, b);
  });
  binary("sub", rnd({3, 4}, rng), rnd({3, 4}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::sub(t, a, b);
  });
  binary("mul", rnd({3, 4}, rng), rnd({3, 4}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::mul(t, a, b);
  });
  binary("div", rnd({3, 4}, rng), rnd_off_zero({3, 4}, rng, 0.5), [](Tape& t, NodeId a, NodeId b) {
    return num::divide(t, a, b);
  });
  binary("add_rowvec", rnd({3, 4}, rng), rnd({4}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::add_rowvec(t, a, b);
  });
  binary("mul_rowvec", rnd({3, 4}, rng), rnd({4}, rng), [](Tape& t, NodeId a, NodeId b) {
    return num::mul_rowvec(t, a, b);
  });
  unary("scale", rnd({3, 4}, rng), [](Tape& t, NodeId a) { return num::scale(t, a, -1.3); });
  unary("add_const", rnd({3, 4}, rng), [](Tape& t, NodeId a) { return num::add_const(t, a, 0.7); });
  unary("tanh", rnd({3, 4}, rng), [](Tape& t, NodeId a) { return num::tanh_op(t, a); });
  unary("relu", rnd_off_zero({3, 4}, rng), [](Tape& t, NodeId a) { return num::relu(t, a); });
  unary("sqrt", rnd({3, 4}, rng, 0.5, 3.0), [](Tape& t, NodeId a) { return num::sqrt_op(t, a); });
  unary("softmax", rnd({3, 5}, rng), [](Tape& t, NodeId a) { return num::softmax(t, a); });
  unary("sum_axis", rnd({2, 3, 4}, rng), [](Tape& t, NodeId a) { return num::sum_axis(t, a, 1); });
  unary("repeat_axis", rnd({2, 1, 4}, rng), [](Tape& t, NodeId a) { return num::repeat_axis(t, a, 1, 3); });
  unary("sum_all", rnd({3, 4}, rng), [](Tape& t, NodeId a) { return num::sum_all(t, a); });
  unary("mean", rnd({3, 4}, rng), [](Tape& t, NodeId a) { return num::mean(t, a); });
  unary("bcast_scalar", rnd({1}, rng), [](Tape& t, NodeId a) {
    return num::bcast_scalar(t, a, {2, 3});
  });
  binary("concat", rnd({3, 2}, rng), rnd({3, 4}, rng), [](Tape& t, NodeId a, NodeId b) {
    const NodeId xs[] = {a, b};
    return num::concat(t, xs);
  });
  unary("slice_last", rnd({3, 6}, rng), [](Tape& t, NodeId a) { return num::slice_last(t, a, 1, 3); });
  unary("dropout", rnd({4, 4}, rng), [](Tape& t, NodeId a) {
    std::mt19937_64 mask_rng(99);  // fixed mask so FD sees the same function
    return num::dropout(t, a, 0.3, true, mask_rng);
  });
  unary("layer_norm", rnd_off_zero({3, 5}, rng, 0.05), [](Tape& t, NodeId a) {
    return num::layer_norm(t, a);
  });
  unary("l2_norm", rnd_off_zero({3, 4}, rng, 0.3), [](Tape& t, NodeId a) {
    return num::l2_norm(t, a);
  });
  return cases;
}

}  // namespace

std::vector<OpGradReport> run_op_gradchecks(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<OpGradReport> reports;
  for (int inst = 0; inst < instances; ++inst) {
    std::vector<Case> cases = make_cases(rng);
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
      Case& c = cases[ci];
      if (inst == 0) reports.push_back({c.name, 0.0});
      OpGradReport& rep = reports[ci];

      // Fixed weights make the loss sensitive to every output entry.
      Tensor weights;
      {
        Tape probe;
        std::vector<NodeId> xs;
        for (const Tensor& in : c.inputs) xs.push_back(num::leaf(probe, in, false));
        NodeId out = c.build(probe, xs);
        std::mt19937_64 wrng(seed ^ (ci * 7919 + static_cast<std::size_t>(inst)));
        weights = rnd(probe.value(out).shape(), wrng);
      }

      auto eval = [&](const std::vector<Tensor>& at) {
        Tape t;
        std::vector<NodeId> xs;
        for (const Tensor& in : at) xs.push_back(num::leaf(t, in, false));
        NodeId out = c.build(t, xs);
        NodeId w = num::constant(t, weights);
        return t.value(num::sum_all(t, num::mul(t, out, w)))[0];
      };

      // Reverse-mode gradients.
      Tape t;
      std::vector<NodeId> xs;
      for (const Tensor& in : c.inputs) xs.push_back(num::leaf(t, in, true));
      NodeId out = c.build(t, xs);
      NodeId w = num::constant(t, weights);
      NodeId loss = num::sum_all(t, num::mul(t, out, w));
      std::vector<Tensor> got = num::grad(t, loss, xs);
      std::vector<Tensor> want = finite_diff(eval, c.inputs);
      rep.max_rel_err = std::max(rep.max_rel_err, max_rel_err(got, want));
    }
  }
  return reports;
}

}  // namespace targen::testsupport
