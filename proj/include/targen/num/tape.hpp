//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_NUM_TAPE_HPP_
#define TARGEN_NUM_TAPE_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "targen/num/tensor.hpp"

namespace targen::num {

using NodeId = std::int32_t;

enum class Op : std::uint8_t {
  kLeaf,      // input / parameter (may require grad)
  kConstant,  // fixed data, never differentiated
  kMatMul,    // (2,2), (3,2) shared-weight, (3,3) batched
  kTranspose, // swap last two axes
  kSwapAxes,  // swap arbitrary axes i0, i1
  kReshape,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kAddRowVec,  // [..., n] + [n]
  kMulRowVec,  // [..., n] * [n]
  kScale,      // * a0
  kAddConst,   // + a0
  kTanh,
  kRelu,     // no second-order rule
  kSqrt,
  kLog,
  kSoftmax,  // last axis
  kSumAxis,    // sum over axis i0, keepdim
  kRepeatAxis, // repeat size-1 axis i0 to i1 copies
  kSumAll,     // -> scalar
  kMeanAll,    // -> scalar
  kBcastScalar,  // scalar -> shape_attr
  kConcatLast,   // along last axis
  kSliceLast,    // [i0, i0+i1) of last axis
  kDropout,      // no second-order rule; mask kept in aux
};

struct Node {
  Op op = Op::kLeaf;
  std::array<NodeId, 2> in{-1, -1};
  int n_in = 0;
  std::int64_t i0 = 0, i1 = 0;  // integer attrs (axis, offset, len, ...)
  double a0 = 0.0;              // scalar attr (scale/add constant)
  Shape shape_attr;             // reshape / bcast target
  Tensor value;
  Tensor aux;  // relu/dropout mask
  bool requires_grad = false;
};

// Append-only computation record with eager values. Backward passes emit
// their adjoint computations as ordinary nodes on the same tape, so a
// recorded backward can itself be differentiated (needed by the gradient
// penalty). Single-writer; independent tapes may run concurrently.
class Tape {
public:
  NodeId emit(Node n);
  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Tensor& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::size_t mark() const noexcept { return nodes_.size(); }
  void reset_to(std::size_t mark) { nodes_.resize(mark); }
  void reset() { nodes_.clear(); }

  // Reverse-mode differentiation of a scalar `loss` with respect to `wrt`.
  // Adjoints are built as tape nodes (values computed eagerly); returns one
  // node id per wrt entry (zeros node when disconnected). With
  // `create_graph`, ops lacking a second-order rule throw
  // NestedTapeUnsupported, and the returned nodes are differentiable again.
  std::vector<NodeId> backward(NodeId loss, std::span<const NodeId> wrt,
                               bool create_graph = false);

private:
  std::vector<Node> nodes_;
};

// ---- op builders (eager; all shape-checked, outputs finite-checked) ----

NodeId leaf(Tape& t, Tensor v, bool requires_grad);
NodeId constant(Tape& t, Tensor v);

NodeId matmul(Tape& t, NodeId a, NodeId b);
NodeId transpose(Tape& t, NodeId a);
NodeId swap_axes(Tape& t, NodeId a, std::int64_t ax1, std::int64_t ax2);
NodeId reshape(Tape& t, NodeId a, Shape shape);
NodeId add(Tape& t, NodeId a, NodeId b);
NodeId sub(Tape& t, NodeId a, NodeId b);
NodeId mul(Tape& t, NodeId a, NodeId b);
NodeId divide(Tape& t, NodeId a, NodeId b);
NodeId add_rowvec(Tape& t, NodeId a, NodeId v);
NodeId mul_rowvec(Tape& t, NodeId a, NodeId v);
NodeId scale(Tape& t, NodeId a, double c);
NodeId add_const(Tape& t, NodeId a, double c);
NodeId tanh_op(Tape& t, NodeId a);
NodeId relu(Tape& t, NodeId a);
NodeId sqrt_op(Tape& t, NodeId a);
NodeId log_op(Tape& t, NodeId a);
NodeId softmax(Tape& t, NodeId a);
NodeId sum_axis(Tape& t, NodeId a, std::int64_t axis);
NodeId repeat_axis(Tape& t, NodeId a, std::int64_t axis, std::int64_t n);
NodeId sum_all(Tape& t, NodeId a);
NodeId mean(Tape& t, NodeId a);
NodeId bcast_scalar(Tape& t, NodeId a, Shape shape);
NodeId concat(Tape& t, std::span<const NodeId> xs);  // last axis
NodeId slice_last(Tape& t, NodeId a, std::int64_t off, std::int64_t len);
NodeId dropout(Tape& t, NodeId a, double rate, bool train,
               std::mt19937_64& rng);

// ---- composites ----

// (x - mean) / sqrt(var + eps) over the last axis; no affine.
NodeId layer_norm(Tape& t, NodeId a, double eps = 1e-8);
// sqrt(sum of squares) over all entries -> scalar.
NodeId l2_norm(Tape& t, NodeId a);
// per-row (last axis) L2 norm, keepdim.
NodeId l2_norm_rows(Tape& t, NodeId a);
// flatten all but the leading axis.
NodeId flatten_from(Tape& t, NodeId a, std::int64_t lead_axes);

// Gradients of scalar `loss` wrt `wrt`, as tensors.
std::vector<Tensor> grad(Tape& t, NodeId loss, std::span<const NodeId> wrt);

struct GradNormGrads {
  double penalty = 0.0;            // mean over rows of (||grad||_2 - 1)^2
  std::vector<Tensor> param_grads; // d penalty / d params
};

// Nested differentiation for the gradient penalty: differentiate
// d_output (scalar per row, summed over rows) wrt `x_hat` on a taped
// backward pass, form mean((||g_row||_2 - 1)^2), then differentiate that
// through the recorded backward wrt `params`.
GradNormGrads grad_of_grad_norm(Tape& t, NodeId d_output, NodeId x_hat,
                                std::span<const NodeId> params);

}  // namespace targen::num

#endif  // TARGEN_NUM_TAPE_HPP_
