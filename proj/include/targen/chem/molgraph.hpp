//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_CHEM_MOLGRAPH_HPP_
#define TARGEN_CHEM_MOLGRAPH_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace targen::chem {

// Atom alphabet: 12 elements + Null, in this fixed column order.
enum class Element : std::uint8_t {
  C = 0, O, N, F, K, S, B, P, Br, Ca, Cl, As,
  Null = 12,
};

inline constexpr int kAtomClasses = 13;   // 12 elements + Null
inline constexpr int kBondClasses = 5;    // NoBond + 4 orders
inline constexpr int kMaxAtoms = 45;      // heavy-atom cap

enum class BondOrder : std::uint8_t {
  NoBond = 0, Single, Double, Triple, Aromatic,
};

std::string_view element_symbol(Element e);
// Returns Null for unknown symbols.
Element element_from_symbol(std::string_view s);

// Allowed total valences per element (ascending).
std::span<const int> allowed_valences(Element e);
int max_valence(Element e);

// Standard atomic weight (Da); hydrogen available for implicit-H sums.
double atomic_weight(Element e);
inline constexpr double kHydrogenWeight = 1.008;

struct Bond {
  int i;  // i < j
  int j;
  BondOrder order;
};

// Heavy-atom molecular graph with typed bonds. Immutable once built; the
// builder methods are for parsers and decoders.
class MolGraph {
public:
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  Element atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const std::vector<Element>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  BondOrder bond(int i, int j) const;
  // (neighbor index, order) pairs in insertion order.
  const std::vector<std::pair<int, BondOrder>>& neighbors(int i) const {
    return adj_[static_cast<std::size_t>(i)];
  }
  int degree(int i) const { return static_cast<int>(adj_[static_cast<std::size_t>(i)].size()); }

  // Sum of incident bond orders (aromatic = 1.5), rounded up.
  int bond_order_sum(int i) const;
  bool has_aromatic_bond(int i) const;

  int add_atom(Element e);                       // throws TooManyAtoms
  void add_bond(int i, int j, BondOrder order);  // throws on dup/self/range

  bool connected() const;  // single component (true for empty = false)

private:
  std::vector<Element> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<std::pair<int, BondOrder>>> adj_;
};

// True iff the graph is non-empty, single-component, and every atom's
// rounded-up bond-order sum fits the element's maximum allowed valence.
bool check_validity(const MolGraph& g);

// Implicit hydrogen count: smallest allowed valence that accommodates the
// bond-order sum, minus that sum (0 if none fits).
int implicit_hydrogens(const MolGraph& g, int atom);

}  // namespace targen::chem

#endif  // TARGEN_CHEM_MOLGRAPH_HPP_
