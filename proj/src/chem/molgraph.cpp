//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/chem/molgraph.hpp"

#include <cmath>
#include <string>

#include "targen/errors.hpp"

namespace targen::chem {
namespace {

struct ElementInfo {
  std::string_view symbol;
  double weight;
  std::vector<int> valences;
};

const std::array<ElementInfo, 12>& element_table() {
  static const std::array<ElementInfo, 12> table = {{
      {"C", 12.011, {4}},
      {"O", 15.999, {2}},
      {"N", 14.007, {3, 5}},
      {"F", 18.998, {1}},
      {"K", 39.098, {1}},
      {"S", 32.06, {2, 4, 6}},
      {"B", 10.81, {3}},
      {"P", 30.974, {3, 5}},
      {"Br", 79.904, {1}},
      {"Ca", 40.078, {2}},
      {"Cl", 35.45, {1}},
      {"As", 74.922, {3, 5}},
  }};
  return table;
}

}  // namespace

std::string_view element_symbol(Element e) {
  if (e == Element::Null) return "*";
  return element_table()[static_cast<std::size_t>(e)].symbol;
}

Element element_from_symbol(std::string_view s) {
  const auto& table = element_table();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i].symbol == s) return static_cast<Element>(i);
  return Element::Null;
}

std::span<const int> allowed_valences(Element e) {
  return element_table()[static_cast<std::size_t>(e)].valences;
}

int max_valence(Element e) {
  return element_table()[static_cast<std::size_t>(e)].valences.back();
}

double atomic_weight(Element e) {
  return element_table()[static_cast<std::size_t>(e)].weight;
}

BondOrder MolGraph::bond(int i, int j) const {
  for (const auto& [n, o] : adj_[static_cast<std::size_t>(i)])
    if (n == j) return o;
  return BondOrder::NoBond;
}

int MolGraph::bond_order_sum(int i) const {
  double s = 0.0;
  for (const auto& [n, o] : adj_[static_cast<std::size_t>(i)]) {
    switch (o) {
      case BondOrder::Single: s += 1.0; break;
      case BondOrder::Double: s += 2.0; break;
      case BondOrder::Triple: s += 3.0; break;
      case BondOrder::Aromatic: s += 1.5; break;
      case BondOrder::NoBond: break;
    }
  }
  return static_cast<int>(std::ceil(s - 1e-9));
}

bool MolGraph::has_aromatic_bond(int i) const {
  for (const auto& [n, o] : adj_[static_cast<std::size_t>(i)])
    if (o == BondOrder::Aromatic) return true;
  return false;
}

int MolGraph::add_atom(Element e) {
  if (e == Element::Null) throw DataError("cannot add Null atom");
  if (atom_count() >= kMaxAtoms)
    throw TooManyAtoms("more than " + std::to_string(kMaxAtoms) + " heavy atoms");
  atoms_.push_back(e);
  adj_.emplace_back();
  return atom_count() - 1;
}

void MolGraph::add_bond(int i, int j, BondOrder order) {
  if (i == j) throw DataError("self bond at atom " + std::to_string(i));
  if (i < 0 || j < 0 || i >= atom_count() || j >= atom_count())
    throw DataError("bond endpoint out of range");
  if (order == BondOrder::NoBond) throw DataError("NoBond cannot be added");
  if (bond(i, j) != BondOrder::NoBond)
    throw DataError("duplicate bond " + std::to_string(i) + "-" + std::to_string(j));
  bonds_.push_back({i < j ? i : j, i < j ? j : i, order});
  adj_[static_cast<std::size_t>(i)].emplace_back(j, order);
  adj_[static_cast<std::size_t>(j)].emplace_back(i, order);
}

bool MolGraph::connected() const {
  const int n = atom_count();
  if (n == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    for (const auto& [b, o] : adj_[static_cast<std::size_t>(a)]) {
      if (!seen[static_cast<std::size_t>(b)]) {
        seen[static_cast<std::size_t>(b)] = 1;
        ++visited;
        stack.push_back(b);
      }
    }
  }
  return visited == n;
}

bool check_validity(const MolGraph& g) {
  if (g.atom_count() == 0) return false;
  if (!g.connected()) return false;
  for (int i = 0; i < g.atom_count(); ++i)
    if (g.bond_order_sum(i) > max_valence(g.atom(i))) return false;
  return true;
}

int implicit_hydrogens(const MolGraph& g, int atom) {
  const int used = g.bond_order_sum(atom);
  for (int v : allowed_valences(g.atom(atom)))
    if (v >= used) return v - used;
  return 0;
}

}  // namespace targen::chem
