//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "support/isomorphism.hpp"

#include <algorithm>
#include <vector>

namespace targen::testsupport {
namespace {

using chem::BondOrder;
using chem::MolGraph;

struct Matcher {
  const MolGraph& a;
  const MolGraph& b;
  std::vector<int> map_ab;   // a-atom -> b-atom or -1
  std::vector<char> used_b;

  bool feasible(int ai, int bi) {
    if (a.atom(ai) != b.atom(bi)) return false;
    if (a.degree(ai) != b.degree(bi)) return false;
    // every mapped neighbor of ai must be a neighbor of bi with equal order
    for (const auto& [aj, order] : a.neighbors(ai)) {
      const int bj = map_ab[static_cast<std::size_t>(aj)];
      if (bj >= 0 && b.bond(bi, bj) != order) return false;
    }
    // and vice versa
    for (const auto& [bj, order] : b.neighbors(bi)) {
      for (std::size_t ak = 0; ak < map_ab.size(); ++ak) {
        if (map_ab[ak] == bj && a.bond(ai, static_cast<int>(ak)) != order) return false;
      }
    }
    return true;
  }

  int next_atom() const {
    // prefer an unmapped atom adjacent to the mapped region
    for (std::size_t i = 0; i < map_ab.size(); ++i) {
      if (map_ab[i] >= 0) continue;
      for (const auto& [j, o] : a.neighbors(static_cast<int>(i)))
        if (map_ab[static_cast<std::size_t>(j)] >= 0) return static_cast<int>(i);
    }
    for (std::size_t i = 0; i < map_ab.size(); ++i)
      if (map_ab[i] < 0) return static_cast<int>(i);
    return -1;
  }

  bool extend() {
    const int ai = next_atom();
    if (ai < 0) return true;
    for (int bi = 0; bi < b.atom_count(); ++bi) {
      if (used_b[static_cast<std::size_t>(bi)]) continue;
      if (!feasible(ai, bi)) continue;
      map_ab[static_cast<std::size_t>(ai)] = bi;
      used_b[static_cast<std::size_t>(bi)] = 1;
      if (extend()) return true;
      map_ab[static_cast<std::size_t>(ai)] = -1;
      used_b[static_cast<std::size_t>(bi)] = 0;
    }
    return false;
  }
};

}  // namespace

bool isomorphic(const MolGraph& a, const MolGraph& b) {
  if (a.atom_count() != b.atom_count()) return false;
  if (a.bonds().size() != b.bonds().size()) return false;
  auto profile = [](const MolGraph& g) {
    std::vector<std::pair<int, int>> p;  // (element, degree)
    for (int i = 0; i < g.atom_count(); ++i)
      p.emplace_back(static_cast<int>(g.atom(i)), g.degree(i));
    std::sort(p.begin(), p.end());
    return p;
  };
  if (profile(a) != profile(b)) return false;
  Matcher m{a, b,
            std::vector<int>(static_cast<std::size_t>(a.atom_count()), -1),
            std::vector<char>(static_cast<std::size_t>(b.atom_count()), 0)};
  return m.extend();
}

}  // namespace targen::testsupport
