//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "targen/chem/smiles.hpp"
#include "targen/errors.hpp"

namespace targen::chem {
namespace {

using Ranks = std::vector<int>;

// Dense re-ranking of arbitrary sortable keys.
template <typename Key>
Ranks densify(const std::vector<Key>& keys) {
  std::vector<int> order(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  Ranks ranks(keys.size(), 0);
  int r = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && keys[static_cast<std::size_t>(order[k])] != keys[static_cast<std::size_t>(order[k - 1])]) ++r;
    ranks[static_cast<std::size_t>(order[k])] = r;
  }
  return ranks;
}

int rank_count(const Ranks& r) {
  return r.empty() ? 0 : *std::max_element(r.begin(), r.end()) + 1;
}

// Iterate (rank, sorted (bond, neighbor-rank) list) until the partition
// stops splitting.
Ranks refine(const MolGraph& g, Ranks ranks) {
  const int n = g.atom_count();
  while (true) {
    using Key = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Key> keys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, int>> nb;
      for (const auto& [j, o] : g.neighbors(i))
        nb.emplace_back(static_cast<int>(o), ranks[static_cast<std::size_t>(j)]);
      std::sort(nb.begin(), nb.end());
      keys[static_cast<std::size_t>(i)] = {ranks[static_cast<std::size_t>(i)], std::move(nb)};
    }
    Ranks next = densify(keys);
    if (rank_count(next) == rank_count(ranks)) return next;
    ranks = std::move(next);
  }
}

Ranks initial_ranks(const MolGraph& g) {
  using Key = std::tuple<int, int, std::vector<int>>;
  std::vector<Key> keys;
  keys.reserve(static_cast<std::size_t>(g.atom_count()));
  for (int i = 0; i < g.atom_count(); ++i) {
    std::vector<int> orders;
    for (const auto& [j, o] : g.neighbors(i)) orders.push_back(static_cast<int>(o));
    std::sort(orders.begin(), orders.end());
    keys.emplace_back(static_cast<int>(g.atom(i)), g.degree(i), std::move(orders));
  }
  return densify(keys);
}

std::string emit(const MolGraph& g, const Ranks& ranks);

// Resolve remaining ties by trying each candidate of the first tied class
// and keeping the lexicographically smallest emitted string. The budget
// bounds pathological symmetry; past it, ties break by atom index (still
// deterministic for a fixed input order).
struct TieBreaker {
  const MolGraph& g;
  int budget = 4000;

  std::pair<std::string, Ranks> resolve(Ranks ranks) {
    const int n = g.atom_count();
    while (true) {
      std::vector<std::vector<int>> classes(static_cast<std::size_t>(rank_count(ranks)));
      for (int i = 0; i < n; ++i) classes[static_cast<std::size_t>(ranks[static_cast<std::size_t>(i)])].push_back(i);
      int tied = -1;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].size() > 1) {
          tied = static_cast<int>(c);
          break;
        }
      }
      if (tied < 0) return {emit(g, ranks), ranks};

      const std::vector<int>& cls = classes[static_cast<std::size_t>(tied)];
      std::optional<std::pair<std::string, Ranks>> best;
      for (int candidate : cls) {
        Ranks promoted = ranks;
        // Promote one member below its class, shift everything after.
        for (int i = 0; i < n; ++i)
          if (promoted[static_cast<std::size_t>(i)] >= tied) ++promoted[static_cast<std::size_t>(i)];
        promoted[static_cast<std::size_t>(candidate)] = tied;
        auto result = resolve(refine(g, std::move(promoted)));
        if (!best || result.first < best->first) best = std::move(result);
        if (--budget <= 0) break;
      }
      if (best) return *best;
      // Budget exhausted mid-class: fall back to index order.
      Ranks promoted = ranks;
      for (int i = 0; i < n; ++i)
        if (promoted[static_cast<std::size_t>(i)] >= tied) ++promoted[static_cast<std::size_t>(i)];
      promoted[static_cast<std::size_t>(cls[0])] = tied;
      ranks = refine(g, std::move(promoted));
    }
  }
};

struct Emitter {
  const MolGraph& g;
  const Ranks& ranks;
  std::string out;
  std::vector<char> visited;
  std::map<std::pair<int, int>, int> ring_digits;  // bond (i<j) -> digit
  int next_digit = 1;

  bool aromatic(int i) const { return g.has_aromatic_bond(i); }

  void atom_token(int i) {
    const Element e = g.atom(i);
    const bool arom = aromatic(i);
    std::string sym(element_symbol(e));
    if (arom)
      for (char& c : sym) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const bool organic = e == Element::C || e == Element::N || e == Element::O ||
                         e == Element::P || e == Element::S || e == Element::B ||
                         e == Element::F || e == Element::Cl || e == Element::Br;
    if (organic)
      out += sym;
    else
      out += "[" + sym + "]";
  }

  void bond_token(int a, int b) {
    switch (g.bond(a, b)) {
      case BondOrder::Single:
        // default, except between two aromatic atoms where the implicit
        // bond would read as aromatic
        if (aromatic(a) && aromatic(b)) out += '-';
        break;
      case BondOrder::Double: out += '='; break;
      case BondOrder::Triple: out += '#'; break;
      case BondOrder::Aromatic: break;  // both ends lowercase; implicit
      case BondOrder::NoBond: break;
    }
  }

  // Ring-closure digits are assigned in DFS discovery order.
  std::string ring_token(int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = ring_digits.find({key.first, key.second});
    int d;
    if (it == ring_digits.end()) {
      d = next_digit++;
      if (d > 99) throw DataError("more than 99 simultaneous ring closures");
      ring_digits[{key.first, key.second}] = d;
    } else {
      d = it->second;
    }
    return d < 10 ? std::to_string(d) : "%" + std::to_string(d);
  }

  void dfs(int at, int parent) {
    visited[static_cast<std::size_t>(at)] = 1;
    atom_token(at);

    // Neighbors in canonical-rank order.
    std::vector<int> nb;
    for (const auto& [j, o] : g.neighbors(at))
      if (j != parent) nb.push_back(j);
    std::sort(nb.begin(), nb.end(), [&](int x, int y) {
      return ranks[static_cast<std::size_t>(x)] < ranks[static_cast<std::size_t>(y)];
    });

    // Ring closures first (back edges to visited atoms).
    std::vector<int> children;
    for (int j : nb) {
      if (visited[static_cast<std::size_t>(j)]) {
        bond_token(at, j);
        out += ring_token(at, j);
      } else {
        children.push_back(j);
      }
    }
    for (std::size_t k = 0; k < children.size(); ++k) {
      const int j = children[k];
      if (visited[static_cast<std::size_t>(j)]) {  // became a ring while emitting siblings
        bond_token(at, j);
        out += ring_token(at, j);
        continue;
      }
      const bool last = k + 1 == children.size();
      if (!last) out += '(';
      bond_token(at, j);
      dfs(j, at);
      if (!last) out += ')';
    }
  }

  std::string run() {
    const int n = g.atom_count();
    visited.assign(static_cast<std::size_t>(n), 0);
    // Components ordered by their minimum-rank atom.
    std::vector<int> starts;
    std::vector<int> by_rank(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) by_rank[static_cast<std::size_t>(ranks[static_cast<std::size_t>(i)])] = i;
    bool first = true;
    for (int r = 0; r < n; ++r) {
      const int a = by_rank[static_cast<std::size_t>(r)];
      if (visited[static_cast<std::size_t>(a)]) continue;
      if (!first) out += '.';
      first = false;
      dfs(a, -1);
    }
    return out;
  }
};

std::string emit(const MolGraph& g, const Ranks& ranks) {
  Emitter e{g, ranks};
  return e.run();
}

}  // namespace

std::string write_smiles(const MolGraph& g) {
  if (g.atom_count() == 0) throw EmptyGraph("write_smiles on empty graph");
  TieBreaker tb{g};
  return tb.resolve(refine(g, initial_ranks(g))).first;
}

}  // namespace targen::chem
