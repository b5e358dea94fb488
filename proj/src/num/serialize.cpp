//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/num/serialize.hpp"

#include <cstring>

#include "targen/errors.hpp"

namespace targen::num {
namespace {

// The toolchain targets little-endian platforms; memcpy of scalars is the
// wire format.
template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get(const std::string& buf, std::size_t& off) {
  if (off + sizeof(T) > buf.size()) throw CheckpointCorrupt("truncated tensor blob");
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

void append_tensor(std::string& out, const Tensor& t) {
  out.append("TENS", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
  for (std::int64_t d : t.shape()) put<std::uint64_t>(out, static_cast<std::uint64_t>(d));
  const std::size_t bytes = static_cast<std::size_t>(t.numel()) * sizeof(double);
  const std::size_t pos = out.size();
  out.resize(pos + bytes);
  std::memcpy(out.data() + pos, t.data(), bytes);
}

Tensor read_tensor(const std::string& buf, std::size_t& off) {
  if (off + 4 > buf.size() || std::memcmp(buf.data() + off, "TENS", 4) != 0)
    throw CheckpointCorrupt("bad TENS magic");
  off += 4;
  const std::uint32_t ndim = get<std::uint32_t>(buf, off);
  if (ndim > 8) throw CheckpointCorrupt("tensor rank too large");
  Shape shape;
  std::int64_t n = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const auto d = static_cast<std::int64_t>(get<std::uint64_t>(buf, off));
    if (d < 0 || d > (1 << 24)) throw CheckpointCorrupt("tensor dim out of range");
    shape.push_back(d);
    n *= d;
  }
  const std::size_t bytes = static_cast<std::size_t>(n) * sizeof(double);
  if (off + bytes > buf.size()) throw CheckpointCorrupt("truncated tensor payload");
  std::vector<double> data(static_cast<std::size_t>(n));
  std::memcpy(data.data(), buf.data() + off, bytes);
  off += bytes;
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace targen::num
