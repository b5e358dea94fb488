//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/num/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "targen/errors.hpp"
#include "targen/simd/kernels.hpp"

namespace targen::num {
namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::kLeaf: return "leaf";
    case Op::kConstant: return "constant";
    case Op::kMatMul: return "matmul";
    case Op::kTranspose: return "transpose";
    case Op::kSwapAxes: return "swap_axes";
    case Op::kReshape: return "reshape";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kDiv: return "div";
    case Op::kAddRowVec: return "add_rowvec";
    case Op::kMulRowVec: return "mul_rowvec";
    case Op::kScale: return "scale";
    case Op::kAddConst: return "add_const";
    case Op::kTanh: return "tanh";
    case Op::kRelu: return "relu";
    case Op::kSqrt: return "sqrt";
    case Op::kSoftmax: return "softmax";
    case Op::kSumAxis: return "sum_axis";
    case Op::kRepeatAxis: return "repeat_axis";
    case Op::kSumAll: return "sum_all";
    case Op::kMeanAll: return "mean";
    case Op::kBcastScalar: return "bcast_scalar";
    case Op::kConcatLast: return "concat";
    case Op::kSliceLast: return "slice_last";
    case Op::kDropout: return "dropout";
  }
  return "?";
}

void check_finite(const Tensor& v, Op op) {
  if (!v.all_finite())
    throw NonFiniteValue(std::string(op_name(op)) + " produced non-finite values");
}

std::int64_t last_dim(const Tensor& t) {
  if (t.rank() == 0) throw ShapeMismatch("rank-0 tensor");
  return t.dim(t.rank() - 1);
}

}  // namespace

NodeId Tape::emit(Node n) {
  for (int i = 0; i < n.n_in; ++i) {
    if (n.in[static_cast<std::size_t>(i)] < 0 ||
        n.in[static_cast<std::size_t>(i)] >= static_cast<NodeId>(nodes_.size()))
      throw ShapeMismatch("emit: input id out of range");
  }
  if (n.op != Op::kLeaf && n.op != Op::kConstant) {
    n.requires_grad = false;
    for (int i = 0; i < n.n_in; ++i)
      n.requires_grad |= nodes_[static_cast<std::size_t>(n.in[static_cast<std::size_t>(i)])].requires_grad;
  }
  check_finite(n.value, n.op);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId leaf(Tape& t, Tensor v, bool requires_grad) {
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(v);
  n.requires_grad = requires_grad;
  return t.emit(std::move(n));
}

NodeId constant(Tape& t, Tensor v) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(v);
  return t.emit(std::move(n));
}

// ---------- forward evaluation helpers ----------

static Tensor eval_matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() == 2 && b.rank() == 2) {
    if (a.dim(1) != b.dim(0))
      throw ShapeMismatch("matmul " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
    Tensor c({a.dim(0), b.dim(1)});
    simd::matmul_acc(a.data(), b.data(), c.data(),
                     static_cast<std::size_t>(a.dim(0)), static_cast<std::size_t>(a.dim(1)),
                     static_cast<std::size_t>(b.dim(1)));
    return c;
  }
  if (a.rank() == 3 && b.rank() == 2) {
    if (a.dim(2) != b.dim(0))
      throw ShapeMismatch("matmul " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
    Tensor c({a.dim(0), a.dim(1), b.dim(1)});
    const std::int64_t m = a.dim(1), k = a.dim(2), n = b.dim(1);
    for (std::int64_t i = 0; i < a.dim(0); ++i) {
      simd::matmul_acc(a.data() + i * m * k, b.data(), c.data() + i * m * n,
                       static_cast<std::size_t>(m), static_cast<std::size_t>(k),
                       static_cast<std::size_t>(n));
    }
    return c;
  }
  if (a.rank() == 3 && b.rank() == 3) {
    if (a.dim(0) != b.dim(0) || a.dim(2) != b.dim(1))
      throw ShapeMismatch("matmul " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
    Tensor c({a.dim(0), a.dim(1), b.dim(2)});
    const std::int64_t m = a.dim(1), k = a.dim(2), n = b.dim(2);
    for (std::int64_t i = 0; i < a.dim(0); ++i) {
      simd::matmul_acc(a.data() + i * m * k, b.data() + i * k * n, c.data() + i * m * n,
                       static_cast<std::size_t>(m), static_cast<std::size_t>(k),
                       static_cast<std::size_t>(n));
    }
    return c;
  }
  throw ShapeMismatch("matmul ranks " + std::to_string(a.rank()) + "," + std::to_string(b.rank()));
}

static Tensor eval_transpose(const Tensor& a) {
  if (a.rank() < 2) throw ShapeMismatch("transpose needs rank >= 2");
  Shape s = a.shape();
  std::swap(s[s.size() - 1], s[s.size() - 2]);
  Tensor out(s);
  const std::int64_t r = a.dim(a.rank() - 2), c = a.dim(a.rank() - 1);
  const std::int64_t outer = a.numel() / (r * c);
  for (std::int64_t o = 0; o < outer; ++o) {
    const double* src = a.data() + o * r * c;
    double* dst = out.data() + o * r * c;
    for (std::int64_t i = 0; i < r; ++i)
      for (std::int64_t j = 0; j < c; ++j) dst[j * r + i] = src[i * c + j];
  }
  return out;
}

static Tensor eval_swap_axes(const Tensor& a, std::int64_t ax1, std::int64_t ax2) {
  const std::int64_t rk = a.rank();
  if (ax1 < 0 || ax2 < 0 || ax1 >= rk || ax2 >= rk)
    throw ShapeMismatch("swap_axes axis out of range");
  if (ax1 == ax2) return a;
  Shape s = a.shape();
  std::swap(s[static_cast<std::size_t>(ax1)], s[static_cast<std::size_t>(ax2)]);
  Tensor out(s);
  std::vector<std::int64_t> in_strides(static_cast<std::size_t>(rk), 1);
  for (std::int64_t i = rk - 2; i >= 0; --i)
    in_strides[static_cast<std::size_t>(i)] =
        in_strides[static_cast<std::size_t>(i + 1)] * a.dim(i + 1);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(rk), 0);
  const std::int64_t n = a.numel();
  for (std::int64_t flat = 0; flat < n; ++flat) {
    // idx is the multi-index in the OUTPUT; map to input by swapping axes.
    std::int64_t src = 0;
    for (std::int64_t d = 0; d < rk; ++d) {
      std::int64_t od = idx[static_cast<std::size_t>(d)];
      std::int64_t in_axis = d == ax1 ? ax2 : (d == ax2 ? ax1 : d);
      src += od * in_strides[static_cast<std::size_t>(in_axis)];
    }
    out[flat] = a[src];
    for (std::int64_t d = rk - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < s[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return out;
}

static void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (!a.same_shape(b))
    throw ShapeMismatch(std::string(what) + " " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

static Tensor eval_softmax(const Tensor& a) {
  const std::int64_t c = last_dim(a);
  if (c == 0) throw ShapeMismatch("softmax over empty axis");
  const std::int64_t rows = a.numel() / c;
  Tensor out(a.shape());
  for (std::int64_t r = 0; r < rows; ++r) {
    const double* src = a.data() + r * c;
    double* dst = out.data() + r * c;
    const double mx = simd::max_seq(src, static_cast<std::size_t>(c));
    double s = 0.0;
    for (std::int64_t j = 0; j < c; ++j) {
      dst[j] = std::exp(src[j] - mx);
      s += dst[j];
    }
    for (std::int64_t j = 0; j < c; ++j) dst[j] /= s;
  }
  return out;
}

// ---------- op builders ----------

#define EMIT_BINOP(NAME, OPK, KFIELD)                                         \
  NodeId NAME(Tape& t, NodeId a, NodeId b) {                                  \
    const Tensor& ta = t.value(a);                                            \
    const Tensor& tb = t.value(b);                                            \
    check_same_shape(ta, tb, op_name(Op::OPK));                               \
    Node n;                                                                   \
    n.op = Op::OPK;                                                           \
    n.in = {a, b};                                                            \
    n.n_in = 2;                                                               \
    n.value = Tensor(ta.shape());                                             \
    simd::active().KFIELD(ta.data(), tb.data(), n.value.data(),               \
                          static_cast<std::size_t>(ta.numel()));              \
    return t.emit(std::move(n));                                              \
  }

EMIT_BINOP(add, kAdd, add)
EMIT_BINOP(sub, kSub, sub)
EMIT_BINOP(mul, kMul, mul)
EMIT_BINOP(divide, kDiv, div)
#undef EMIT_BINOP

NodeId matmul(Tape& t, NodeId a, NodeId b) {
  Node n;
  n.op = Op::kMatMul;
  n.in = {a, b};
  n.n_in = 2;
  n.value = eval_matmul(t.value(a), t.value(b));
  return t.emit(std::move(n));
}

NodeId transpose(Tape& t, NodeId a) {
  Node n;
  n.op = Op::kTranspose;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = eval_transpose(t.value(a));
  return t.emit(std::move(n));
}

NodeId swap_axes(Tape& t, NodeId a, std::int64_t ax1, std::int64_t ax2) {
  Node n;
  n.op = Op::kSwapAxes;
  n.in = {a, -1};
  n.n_in = 1;
  n.i0 = ax1;
  n.i1 = ax2;
  n.value = eval_swap_axes(t.value(a), ax1, ax2);
  return t.emit(std::move(n));
}

NodeId reshape(Tape& t, NodeId a, Shape shape) {
  const Tensor& ta = t.value(a);
  if (numel_of(shape) != ta.numel())
    throw ShapeMismatch("reshape " + shape_str(ta.shape()) + " -> " + shape_str(shape));
  Node n;
  n.op = Op::kReshape;
  n.in = {a, -1};
  n.n_in = 1;
  n.shape_attr = shape;
  n.value = Tensor(std::move(shape), std::vector<double>(ta.data(), ta.data() + ta.numel()));
  return t.emit(std::move(n));
}

NodeId add_rowvec(Tape& t, NodeId a, NodeId v) {
  const Tensor& ta = t.value(a);
  const Tensor& tv = t.value(v);
  if (tv.rank() != 1 || tv.dim(0) != last_dim(ta))
    throw ShapeMismatch("add_rowvec " + shape_str(ta.shape()) + " + " + shape_str(tv.shape()));
  Node n;
  n.op = Op::kAddRowVec;
  n.in = {a, v};
  n.n_in = 2;
  n.value = Tensor(ta.shape());
  const std::int64_t c = tv.dim(0), rows = ta.numel() / c;
  for (std::int64_t r = 0; r < rows; ++r)
    simd::active().add(ta.data() + r * c, tv.data(), n.value.data() + r * c,
                       static_cast<std::size_t>(c));
  return t.emit(std::move(n));
}

NodeId mul_rowvec(Tape& t, NodeId a, NodeId v) {
  const Tensor& ta = t.value(a);
  const Tensor& tv = t.value(v);
  if (tv.rank() != 1 || tv.dim(0) != last_dim(ta))
    throw ShapeMismatch("mul_rowvec " + shape_str(ta.shape()) + " * " + shape_str(tv.shape()));
  Node n;
  n.op = Op::kMulRowVec;
  n.in = {a, v};
  n.n_in = 2;
  n.value = Tensor(ta.shape());
  const std::int64_t c = tv.dim(0), rows = ta.numel() / c;
  for (std::int64_t r = 0; r < rows; ++r)
    simd::active().mul(ta.data() + r * c, tv.data(), n.value.data() + r * c,
                       static_cast<std::size_t>(c));
  return t.emit(std::move(n));
}

NodeId scale(Tape& t, NodeId a, double c) {
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kScale;
  n.in = {a, -1};
  n.n_in = 1;
  n.a0 = c;
  n.value = Tensor(ta.shape());
  simd::active().scale(ta.data(), c, n.value.data(), static_cast<std::size_t>(ta.numel()));
  return t.emit(std::move(n));
}

NodeId add_const(Tape& t, NodeId a, double c) {
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kAddConst;
  n.in = {a, -1};
  n.n_in = 1;
  n.a0 = c;
  n.value = Tensor(ta.shape());
  simd::active().add_const(ta.data(), c, n.value.data(), static_cast<std::size_t>(ta.numel()));
  return t.emit(std::move(n));
}

NodeId tanh_op(Tape& t, NodeId a) {
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kTanh;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = Tensor(ta.shape());
  for (std::int64_t i = 0; i < ta.numel(); ++i) n.value[i] = std::tanh(ta[i]);
  return t.emit(std::move(n));
}

NodeId relu(Tape& t, NodeId a) {
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kRelu;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = Tensor(ta.shape());
  n.aux = Tensor(ta.shape());
  for (std::int64_t i = 0; i < ta.numel(); ++i) {
    const bool pos = ta[i] > 0.0;
    n.value[i] = pos ? ta[i] : 0.0;
    n.aux[i] = pos ? 1.0 : 0.0;
  }
  return t.emit(std::move(n));
}

NodeId sqrt_op(Tape& t, NodeId a) {
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kSqrt;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = Tensor(ta.shape());
  for (std::int64_t i = 0; i < ta.numel(); ++i) n.value[i] = std::sqrt(ta[i]);
  return t.emit(std::move(n));
}

NodeId log_op(Tape& t, NodeId a) {
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kLog;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = Tensor(ta.shape());
  for (std::int64_t i = 0; i < ta.numel(); ++i) n.value[i] = std::log(ta[i]);
  return t.emit(std::move(n));
}

NodeId softmax(Tape& t, NodeId a) {
  Node n;
  n.op = Op::kSoftmax;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = eval_softmax(t.value(a));
  return t.emit(std::move(n));
}

NodeId sum_axis(Tape& t, NodeId a, std::int64_t axis) {
  const Tensor& ta = t.value(a);
  if (axis < 0 || axis >= ta.rank()) throw ShapeMismatch("sum_axis axis out of range");
  Shape s = ta.shape();
  const std::int64_t d = s[static_cast<std::size_t>(axis)];
  s[static_cast<std::size_t>(axis)] = 1;
  std::int64_t inner = 1;
  for (std::int64_t i = axis + 1; i < ta.rank(); ++i) inner *= ta.dim(i);
  const std::int64_t outer = ta.numel() / (d * inner);
  Node n;
  n.op = Op::kSumAxis;
  n.in = {a, -1};
  n.n_in = 1;
  n.i0 = axis;
  n.value = Tensor(s);
  for (std::int64_t o = 0; o < outer; ++o) {
    double* dst = n.value.data() + o * inner;
    const double* src = ta.data() + o * d * inner;
    for (std::int64_t j = 0; j < d; ++j)
      simd::active().add(dst, src + j * inner, dst, static_cast<std::size_t>(inner));
  }
  return t.emit(std::move(n));
}

NodeId repeat_axis(Tape& t, NodeId a, std::int64_t axis, std::int64_t count) {
  const Tensor& ta = t.value(a);
  if (axis < 0 || axis >= ta.rank()) throw ShapeMismatch("repeat_axis axis out of range");
  if (ta.dim(axis) != 1) throw ShapeMismatch("repeat_axis: axis size must be 1");
  if (count < 1) throw ShapeMismatch("repeat_axis: count < 1");
  Shape s = ta.shape();
  s[static_cast<std::size_t>(axis)] = count;
  std::int64_t inner = 1;
  for (std::int64_t i = axis + 1; i < ta.rank(); ++i) inner *= ta.dim(i);
  const std::int64_t outer = ta.numel() / inner;
  Node n;
  n.op = Op::kRepeatAxis;
  n.in = {a, -1};
  n.n_in = 1;
  n.i0 = axis;
  n.i1 = count;
  n.value = Tensor(s);
  for (std::int64_t o = 0; o < outer; ++o) {
    const double* src = ta.data() + o * inner;
    for (std::int64_t j = 0; j < count; ++j)
      std::copy(src, src + inner, n.value.data() + (o * count + j) * inner);
  }
  return t.emit(std::move(n));
}

NodeId sum_all(Tape& t, NodeId a) {
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kSumAll;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = Tensor::scalar(simd::sum_seq(ta.data(), static_cast<std::size_t>(ta.numel())));
  return t.emit(std::move(n));
}

NodeId mean(Tape& t, NodeId a) {
  const Tensor& ta = t.value(a);
  if (ta.numel() == 0) throw ShapeMismatch("mean of empty tensor");
  Node n;
  n.op = Op::kMeanAll;
  n.in = {a, -1};
  n.n_in = 1;
  n.value = Tensor::scalar(simd::sum_seq(ta.data(), static_cast<std::size_t>(ta.numel())) /
                           static_cast<double>(ta.numel()));
  return t.emit(std::move(n));
}

NodeId bcast_scalar(Tape& t, NodeId a, Shape shape) {
  const Tensor& ta = t.value(a);
  if (ta.numel() != 1) throw ShapeMismatch("bcast_scalar: input not scalar");
  Node n;
  n.op = Op::kBcastScalar;
  n.in = {a, -1};
  n.n_in = 1;
  n.shape_attr = shape;
  n.value = Tensor::full(std::move(shape), ta[0]);
  return t.emit(std::move(n));
}

NodeId concat(Tape& t, std::span<const NodeId> xs) {
  if (xs.empty()) throw ShapeMismatch("concat of nothing");
  if (xs.size() == 1) return xs[0];
  NodeId acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const Tensor& ta = t.value(acc);
    const Tensor& tb = t.value(xs[i]);
    if (ta.rank() != tb.rank()) throw ShapeMismatch("concat rank mismatch");
    for (std::int64_t d = 0; d + 1 < ta.rank(); ++d)
      if (ta.dim(d) != tb.dim(d))
        throw ShapeMismatch("concat " + shape_str(ta.shape()) + " | " + shape_str(tb.shape()));
    Shape s = ta.shape();
    const std::int64_t ca = last_dim(ta), cb = last_dim(tb);
    s[s.size() - 1] = ca + cb;
    Node n;
    n.op = Op::kConcatLast;
    n.in = {acc, xs[i]};
    n.n_in = 2;
    n.value = Tensor(s);
    const std::int64_t rows = ta.numel() / ca;
    for (std::int64_t r = 0; r < rows; ++r) {
      std::copy(ta.data() + r * ca, ta.data() + (r + 1) * ca, n.value.data() + r * (ca + cb));
      std::copy(tb.data() + r * cb, tb.data() + (r + 1) * cb, n.value.data() + r * (ca + cb) + ca);
    }
    acc = t.emit(std::move(n));
  }
  return acc;
}

NodeId slice_last(Tape& t, NodeId a, std::int64_t off, std::int64_t len) {
  const Tensor& ta = t.value(a);
  const std::int64_t c = last_dim(ta);
  if (off < 0 || len <= 0 || off + len > c) throw ShapeMismatch("slice_last out of bounds");
  Shape s = ta.shape();
  s[s.size() - 1] = len;
  Node n;
  n.op = Op::kSliceLast;
  n.in = {a, -1};
  n.n_in = 1;
  n.i0 = off;
  n.i1 = len;
  n.value = Tensor(s);
  const std::int64_t rows = ta.numel() / c;
  for (std::int64_t r = 0; r < rows; ++r)
    std::copy(ta.data() + r * c + off, ta.data() + r * c + off + len, n.value.data() + r * len);
  return t.emit(std::move(n));
}

NodeId dropout(Tape& t, NodeId a, double rate, bool train, std::mt19937_64& rng) {
  if (rate < 0.0 || rate >= 1.0) throw ShapeMismatch("dropout rate must be in [0,1)");
  if (!train || rate == 0.0) return a;
  const Tensor& ta = t.value(a);
  Node n;
  n.op = Op::kDropout;
  n.in = {a, -1};
  n.n_in = 1;
  n.a0 = rate;
  n.aux = Tensor(ta.shape());
  n.value = Tensor(ta.shape());
  std::bernoulli_distribution keep(1.0 - rate);
  const double inv = 1.0 / (1.0 - rate);
  for (std::int64_t i = 0; i < ta.numel(); ++i) {
    n.aux[i] = keep(rng) ? inv : 0.0;
    n.value[i] = ta[i] * n.aux[i];
  }
  return t.emit(std::move(n));
}

// ---------- composites ----------

NodeId layer_norm(Tape& t, NodeId a, double eps) {
  const Tensor& ta = t.value(a);
  const std::int64_t c = last_dim(ta);
  const std::int64_t axis = ta.rank() - 1;
  NodeId mu = scale(t, sum_axis(t, a, axis), 1.0 / static_cast<double>(c));
  NodeId xc = sub(t, a, repeat_axis(t, mu, axis, c));
  NodeId var = scale(t, sum_axis(t, mul(t, xc, xc), axis), 1.0 / static_cast<double>(c));
  NodeId denom = sqrt_op(t, add_const(t, var, eps));
  return divide(t, xc, repeat_axis(t, denom, axis, c));
}

NodeId l2_norm(Tape& t, NodeId a) {
  return sqrt_op(t, sum_all(t, mul(t, a, a)));
}

NodeId l2_norm_rows(Tape& t, NodeId a) {
  const std::int64_t axis = t.value(a).rank() - 1;
  return sqrt_op(t, sum_axis(t, mul(t, a, a), axis));
}

NodeId flatten_from(Tape& t, NodeId a, std::int64_t lead_axes) {
  const Tensor& ta = t.value(a);
  if (lead_axes < 0 || lead_axes >= ta.rank()) throw ShapeMismatch("flatten_from");
  Shape s;
  std::int64_t tail = 1;
  for (std::int64_t i = 0; i < ta.rank(); ++i) {
    if (i < lead_axes)
      s.push_back(ta.dim(i));
    else
      tail *= ta.dim(i);
  }
  s.push_back(tail);
  return reshape(t, a, std::move(s));
}

// ---------- backward ----------

std::vector<NodeId> Tape::backward(NodeId loss, std::span<const NodeId> wrt,
                                   bool create_graph) {
  if (loss < 0 || static_cast<std::size_t>(loss) >= nodes_.size())
    throw ShapeMismatch("backward: bad loss id");
  if (value(loss).numel() != 1) throw NotScalarLoss("loss has numel != 1");
  const std::size_t n0 = static_cast<std::size_t>(loss) + 1;

  // Nodes downstream of any wrt target: only these need adjoints.
  std::vector<char> from_wrt(n0, 0);
  for (NodeId w : wrt) {
    if (w < 0 || static_cast<std::size_t>(w) >= nodes_.size())
      throw ShapeMismatch("backward: bad wrt id");
    if (static_cast<std::size_t>(w) < n0) from_wrt[static_cast<std::size_t>(w)] = 1;
  }
  for (std::size_t i = 0; i < n0; ++i) {
    const Node& nd = nodes_[i];
    for (int k = 0; k < nd.n_in; ++k) {
      NodeId in = nd.in[static_cast<std::size_t>(k)];
      if (from_wrt[static_cast<std::size_t>(in)]) {
        from_wrt[i] = 1;
        break;
      }
    }
  }

  std::vector<NodeId> adj(n0, -1);
  adj[static_cast<std::size_t>(loss)] = constant(*this, Tensor::full(value(loss).shape(), 1.0));

  auto accumulate = [&](NodeId target, NodeId piece) {
    auto& slot = adj[static_cast<std::size_t>(target)];
    slot = slot < 0 ? piece : add(*this, slot, piece);
  };

  for (std::int64_t idv = static_cast<std::int64_t>(n0) - 1; idv >= 0; --idv) {
    const NodeId id = static_cast<NodeId>(idv);
    const NodeId g = adj[static_cast<std::size_t>(idv)];
    if (g < 0) continue;
    // Snapshot what the VJP needs; emitting adjoint nodes may reallocate.
    const Op op = nodes_[static_cast<std::size_t>(idv)].op;
    const NodeId ia = nodes_[static_cast<std::size_t>(idv)].in[0];
    const NodeId ib = nodes_[static_cast<std::size_t>(idv)].in[1];
    const std::int64_t i0 = nodes_[static_cast<std::size_t>(idv)].i0;
    const std::int64_t i1 = nodes_[static_cast<std::size_t>(idv)].i1;
    const double a0 = nodes_[static_cast<std::size_t>(idv)].a0;
    const bool need_a = ia >= 0 && from_wrt[static_cast<std::size_t>(ia)];
    const bool need_b = ib >= 0 && from_wrt[static_cast<std::size_t>(ib)];
    if (!need_a && !need_b) continue;

    Tape& t = *this;
    switch (op) {
      case Op::kLeaf:
      case Op::kConstant:
        break;
      case Op::kMatMul: {
        const std::int64_t ra = value(ia).rank(), rb = value(ib).rank();
        if (ra == 3 && rb == 2) {
          if (need_a) accumulate(ia, matmul(t, g, transpose(t, ib)));
          if (need_b) {
            const Shape as = value(ia).shape();  // copy: emits reallocate
            const Shape gs = value(g).shape();
            NodeId a2 = reshape(t, ia, {as[0] * as[1], as[2]});
            NodeId g2 = reshape(t, g, {gs[0] * gs[1], gs[2]});
            accumulate(ib, matmul(t, transpose(t, a2), g2));
          }
        } else {
          if (need_a) accumulate(ia, matmul(t, g, transpose(t, ib)));
          if (need_b) accumulate(ib, matmul(t, transpose(t, ia), g));
        }
        break;
      }
      case Op::kTranspose:
        if (need_a) accumulate(ia, transpose(t, g));
        break;
      case Op::kSwapAxes:
        if (need_a) accumulate(ia, swap_axes(t, g, i0, i1));
        break;
      case Op::kReshape:
        if (need_a) accumulate(ia, reshape(t, g, value(ia).shape()));
        break;
      case Op::kAdd:
        if (need_a) accumulate(ia, g);
        if (need_b) accumulate(ib, g);
        break;
      case Op::kSub:
        if (need_a) accumulate(ia, g);
        if (need_b) accumulate(ib, scale(t, g, -1.0));
        break;
      case Op::kMul:
        if (need_a) accumulate(ia, mul(t, g, ib));
        if (need_b) accumulate(ib, mul(t, g, ia));
        break;
      case Op::kDiv:
        if (need_a) accumulate(ia, divide(t, g, ib));
        if (need_b) accumulate(ib, scale(t, mul(t, g, divide(t, id, ib)), -1.0));
        break;
      case Op::kAddRowVec: {
        if (need_a) accumulate(ia, g);
        if (need_b) {
          const Tensor& gv = value(g);
          const std::int64_t c = gv.dim(gv.rank() - 1);
          const std::int64_t rows = gv.numel() / c;
          NodeId g2 = reshape(t, g, {rows, c});
          NodeId ones = constant(t, Tensor::full({1, rows}, 1.0));
          accumulate(ib, reshape(t, matmul(t, ones, g2), {c}));
        }
        break;
      }
      case Op::kMulRowVec: {
        if (need_a) accumulate(ia, mul_rowvec(t, g, ib));
        if (need_b) {
          NodeId prod = mul(t, g, ia);
          const Tensor& gv = value(g);
          const std::int64_t c = gv.dim(gv.rank() - 1);
          const std::int64_t rows = gv.numel() / c;
          NodeId p2 = reshape(t, prod, {rows, c});
          NodeId ones = constant(t, Tensor::full({1, rows}, 1.0));
          accumulate(ib, reshape(t, matmul(t, ones, p2), {c}));
        }
        break;
      }
      case Op::kScale:
        if (need_a) accumulate(ia, scale(t, g, a0));
        break;
      case Op::kAddConst:
        if (need_a) accumulate(ia, g);
        break;
      case Op::kTanh:
        if (need_a)
          accumulate(ia, mul(t, g, add_const(t, scale(t, mul(t, id, id), -1.0), 1.0)));
        break;
      case Op::kRelu:
        if (create_graph)
          throw NestedTapeUnsupported("relu has no second-order rule");
        if (need_a)
          accumulate(ia, mul(t, g, constant(t, nodes_[static_cast<std::size_t>(idv)].aux)));
        break;
      case Op::kSqrt:
        if (need_a) accumulate(ia, divide(t, g, scale(t, id, 2.0)));
        break;
      case Op::kSoftmax: {
        if (need_a) {
          const std::int64_t axis = value(id).rank() - 1;
          const std::int64_t c = value(id).dim(axis);
          NodeId gy = mul(t, g, id);
          NodeId srep = repeat_axis(t, sum_axis(t, gy, axis), axis, c);
          accumulate(ia, mul(t, id, sub(t, g, srep)));
        }
        break;
      }
      case Op::kSumAxis:
        if (need_a) accumulate(ia, repeat_axis(t, g, i0, value(ia).dim(i0)));
        break;
      case Op::kRepeatAxis:
        if (need_a) accumulate(ia, sum_axis(t, g, i0));
        break;
      case Op::kSumAll:
        if (need_a) accumulate(ia, bcast_scalar(t, g, value(ia).shape()));
        break;
      case Op::kMeanAll:
        if (need_a)
          accumulate(ia, bcast_scalar(t, scale(t, g, 1.0 / static_cast<double>(value(ia).numel())),
                                      value(ia).shape()));
        break;
      case Op::kBcastScalar:
        if (need_a) accumulate(ia, sum_all(t, g));
        break;
      case Op::kConcatLast: {
        const std::int64_t ca = value(ia).dim(value(ia).rank() - 1);
        const std::int64_t cb = value(ib).dim(value(ib).rank() - 1);
        if (need_a) accumulate(ia, slice_last(t, g, 0, ca));
        if (need_b) accumulate(ib, slice_last(t, g, ca, cb));
        break;
      }
      case Op::kSliceLast: {
        if (need_a) {
          const Shape av_shape = value(ia).shape();  // copy: emits reallocate
          const std::int64_t c = av_shape[av_shape.size() - 1];
          std::vector<NodeId> pieces;
          if (i0 > 0) {
            Shape s = av_shape;
            s[s.size() - 1] = i0;
            pieces.push_back(constant(t, Tensor(std::move(s))));
          }
          pieces.push_back(g);
          if (i0 + i1 < c) {
            Shape s = av_shape;
            s[s.size() - 1] = c - i0 - i1;
            pieces.push_back(constant(t, Tensor(std::move(s))));
          }
          accumulate(ia, concat(t, pieces));
        }
        break;
      }
      case Op::kDropout:
        if (create_graph)
          throw NestedTapeUnsupported("dropout has no second-order rule");
        if (need_a)
          accumulate(ia, mul(t, g, constant(t, nodes_[static_cast<std::size_t>(idv)].aux)));
        break;
    }
  }

  std::vector<NodeId> out;
  out.reserve(wrt.size());
  for (NodeId w : wrt) {
    NodeId gw = static_cast<std::size_t>(w) < n0 ? adj[static_cast<std::size_t>(w)] : -1;
    if (gw < 0) gw = constant(*this, Tensor(value(w).shape()));
    out.push_back(gw);
  }
  return out;
}

std::vector<Tensor> grad(Tape& t, NodeId loss, std::span<const NodeId> wrt) {
  std::vector<NodeId> ids = t.backward(loss, wrt, false);
  std::vector<Tensor> out;
  out.reserve(ids.size());
  for (NodeId id : ids) out.push_back(t.value(id));
  return out;
}

GradNormGrads grad_of_grad_norm(Tape& t, NodeId d_output, NodeId x_hat,
                                std::span<const NodeId> params) {
  NodeId loss1 = t.value(d_output).numel() == 1 ? d_output : sum_all(t, d_output);
  const NodeId wrt1[] = {x_hat};
  NodeId gx = t.backward(loss1, wrt1, /*create_graph=*/true)[0];

  // Tiny epsilon inside the sqrt keeps the nested derivative finite when the
  // critic's input gradient vanishes (sqrt'(0) would be infinite).
  constexpr double kNormEps = 1e-12;
  NodeId penalty;
  if (t.value(x_hat).rank() <= 1) {
    NodeId nrm = sqrt_op(t, add_const(t, sum_all(t, mul(t, gx, gx)), kNormEps));
    NodeId d = add_const(t, nrm, -1.0);
    penalty = mul(t, d, d);
  } else {
    NodeId g2 = flatten_from(t, gx, 1);
    const std::int64_t axis = t.value(g2).rank() - 1;
    NodeId sq = sum_axis(t, mul(t, g2, g2), axis);  // [B,1]
    NodeId nrm = sqrt_op(t, add_const(t, sq, kNormEps));
    NodeId d = add_const(t, nrm, -1.0);
    penalty = mean(t, mul(t, d, d));
  }

  GradNormGrads out;
  out.penalty = t.value(penalty)[0];
  std::vector<NodeId> ids = t.backward(penalty, params, false);
  out.param_grads.reserve(ids.size());
  for (NodeId id : ids) out.param_grads.push_back(t.value(id));
  return out;
}

}  // namespace targen::num
