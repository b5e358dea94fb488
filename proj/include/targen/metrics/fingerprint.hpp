//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_METRICS_FINGERPRINT_HPP_
#define TARGEN_METRICS_FINGERPRINT_HPP_

#include <cstdint>
#include <vector>

#include "targen/chem/molgraph.hpp"

namespace targen::metrics {

// Fixed-width bit vector from radius-0..2 circular environment hashing
// (ECFP style). Identical for isomorphic graphs by construction: every hash
// input is an order-independent canonical tuple.
class Fingerprint {
public:
  explicit Fingerprint(int bits = 2048) : bits_(bits), words_((bits + 63) / 64, 0) {}

  int width() const { return bits_; }
  void set(std::uint64_t h) {
    const std::uint64_t b = h % static_cast<std::uint64_t>(bits_);
    words_[b >> 6] |= 1ULL << (b & 63);
  }
  bool test(int b) const { return (words_[static_cast<std::size_t>(b) >> 6] >> (b & 63)) & 1; }
  int popcount() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) = default;

private:
  int bits_;
  std::vector<std::uint64_t> words_;
};

Fingerprint fingerprint(const chem::MolGraph& g, int bits = 2048);  // EmptyGraph

// |a & b| / |a | b|; 1.0 when both are empty. WidthMismatch on width diff.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

// Bemis-Murcko scaffold fingerprint; all-zero for acyclic molecules (empty
// scaffold convention).
Fingerprint scaffold_fingerprint(const chem::MolGraph& g, int bits = 2048);

}  // namespace targen::metrics

#endif  // TARGEN_METRICS_FINGERPRINT_HPP_
