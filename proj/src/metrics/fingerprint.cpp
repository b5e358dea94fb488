//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/metrics/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "targen/errors.hpp"
#include "targen/metrics/metrics.hpp"

namespace targen::metrics {
namespace {

// Fixed 64-bit mixer; std::hash is implementation-defined and would break
// cross-build fingerprint stability.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t seed, std::uint64_t v) {
  return mix(seed ^ (v + 0x165667b19e3779f9ULL + (seed << 12) + (seed >> 4)));
}

}  // namespace

int Fingerprint::popcount() const {
  int n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

Fingerprint fingerprint(const chem::MolGraph& g, int bits) {
  if (g.atom_count() == 0) throw EmptyGraph("fingerprint of empty graph");
  const int n = g.atom_count();
  Fingerprint fp(bits);

  // radius 0: (element, degree, sorted bond orders)
  std::vector<std::uint64_t> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int> orders;
    for (const auto& [j, o] : g.neighbors(i)) orders.push_back(static_cast<int>(o));
    std::sort(orders.begin(), orders.end());
    std::uint64_t v = combine(0x5eedULL, static_cast<std::uint64_t>(g.atom(i)));
    v = combine(v, static_cast<std::uint64_t>(g.degree(i)));
    for (int o : orders) v = combine(v, static_cast<std::uint64_t>(o));
    h[static_cast<std::size_t>(i)] = v;
    fp.set(v);
  }

  // radius 1..2: hash of (own hash, sorted (bond, neighbor hash) pairs)
  for (int radius = 1; radius <= 2; ++radius) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, std::uint64_t>> env;
      for (const auto& [j, o] : g.neighbors(i))
        env.emplace_back(static_cast<int>(o), h[static_cast<std::size_t>(j)]);
      std::sort(env.begin(), env.end());
      std::uint64_t v = combine(static_cast<std::uint64_t>(radius), h[static_cast<std::size_t>(i)]);
      for (const auto& [o, nh] : env) {
        v = combine(v, static_cast<std::uint64_t>(o));
        v = combine(v, nh);
      }
      next[static_cast<std::size_t>(i)] = v;
      fp.set(v);
    }
    h = std::move(next);
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width())
    throw WidthMismatch("fingerprint widths " + std::to_string(a.width()) + " vs " +
                        std::to_string(b.width()));
  int both = 0, any = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    both += std::popcount(a.words()[w] & b.words()[w]);
    any += std::popcount(a.words()[w] | b.words()[w]);
  }
  if (any == 0) return 1.0;  // both empty
  return static_cast<double>(both) / static_cast<double>(any);
}

Fingerprint scaffold_fingerprint(const chem::MolGraph& g, int bits) {
  const chem::MolGraph s = murcko_scaffold(g);
  if (s.atom_count() == 0) return Fingerprint(bits);  // empty scaffold
  return fingerprint(s, bits);
}

}  // namespace targen::metrics
