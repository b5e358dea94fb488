//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_NUM_SERIALIZE_HPP_
#define TARGEN_NUM_SERIALIZE_HPP_

#include <string>

#include "targen/num/tensor.hpp"

namespace targen::num {

// TENS blob: magic "TENS", u32 ndim, u64 dims[ndim], raw f64 payload.
// All little-endian.
void append_tensor(std::string& out, const Tensor& t);
// Reads one blob starting at `off`; advances `off`. Throws CheckpointCorrupt.
Tensor read_tensor(const std::string& buf, std::size_t& off);

}  // namespace targen::num

#endif  // TARGEN_NUM_SERIALIZE_HPP_
