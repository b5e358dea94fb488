//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/metrics/descriptors.hpp"

#include <functional>
#include <sstream>

#include "targen/errors.hpp"
#include "targen/util.hpp"

namespace targen::metrics {
namespace {

int pattern_field(const std::string& tok, const char* what) {
  if (tok == ".") return -1;
  if (tok == "0") return 0;
  if (tok == "1") return 1;
  if (tok == "2" || tok == "2+") return 2;
  throw DataError(std::string("bad pattern '") + tok + "' for " + what);
}

std::vector<ContribRule> parse_rules(const std::string& text, const char* what) {
  std::vector<ContribRule> rules;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string el, arom, nh, dbl, val;
    if (!(ls >> el)) continue;
    if (!(ls >> arom >> nh >> dbl >> val))
      throw DataError(std::string(what) + " line " + std::to_string(lineno) + ": need 5 columns");
    ContribRule r;
    r.per_hydrogen = el == "H";
    if (!r.per_hydrogen) {
      r.element = chem::element_from_symbol(el);
      if (r.element == chem::Element::Null)
        throw DataError(std::string(what) + " line " + std::to_string(lineno) + ": unknown element " + el);
    } else {
      r.element = chem::Element::Null;
    }
    r.aromatic = pattern_field(arom, "aromatic");
    r.n_h = pattern_field(nh, "n_h");
    r.has_double = pattern_field(dbl, "has_double");
    r.value = std::stod(val);
    rules.push_back(r);
  }
  return rules;
}

// Shipped in share/logp_contrib.tsv; simplified Wildman-Crippen subset.
constexpr const char* kLogpBuiltin = R"(# element aromatic n_h has_double value
C  1 . . 0.2955
C  0 . . 0.1441
N  1 . . -0.3239
N  0 . . -1.0190
O  1 . . 0.1552
O  0 . . -0.2893
F  . . . 0.4202
Cl . . . 0.6895
Br . . . 0.8456
S  1 . . 0.6237
S  0 . . 0.6482
P  . . . 0.8612
B  . . . -0.3187
K  . . . -1.0000
Ca . . . -1.0000
As . . . 0.5000
H  . . . 0.1230
)";

// Shipped in share/tpsa_contrib.tsv; simplified Ertl subset.
constexpr const char* kTpsaBuiltin = R"(# element aromatic n_h has_double value
N  1 . . 12.89
N  0 0 . 3.24
N  0 1 . 12.03
N  0 2 . 26.02
O  1 . . 13.14
O  0 0 1 17.07
O  0 0 . 9.23
O  0 1 . 20.23
S  1 . . 28.24
S  0 1 . 38.80
S  0 0 . 25.30
P  . . . 13.59
)";

double apply_rules(const std::vector<ContribRule>& rules, chem::Element e, bool aromatic,
                   int n_h, bool has_double, int* hydrogen_count_for_logp) {
  for (const ContribRule& r : rules) {
    if (r.per_hydrogen) continue;
    if (r.element != e) continue;
    if (r.aromatic >= 0 && r.aromatic != (aromatic ? 1 : 0)) continue;
    if (r.n_h == 0 && n_h != 0) continue;
    if (r.n_h == 1 && n_h != 1) continue;
    if (r.n_h == 2 && n_h < 2) continue;
    if (r.has_double >= 0 && r.has_double != (has_double ? 1 : 0)) continue;
    if (hydrogen_count_for_logp) *hydrogen_count_for_logp += n_h;
    return r.value;
  }
  if (hydrogen_count_for_logp) *hydrogen_count_for_logp += n_h;
  return 0.0;
}

double hydrogen_rule_value(const std::vector<ContribRule>& rules) {
  for (const ContribRule& r : rules)
    if (r.per_hydrogen) return r.value;
  return 0.0;
}

}  // namespace

const ContribTables& ContribTables::builtin() {
  static const ContribTables t{parse_rules(kLogpBuiltin, "logp"),
                               parse_rules(kTpsaBuiltin, "tpsa")};
  return t;
}

ContribTables ContribTables::load(const std::string& logp_path, const std::string& tpsa_path) {
  return {parse_rules(read_file(logp_path), "logp"),
          parse_rules(read_file(tpsa_path), "tpsa")};
}

std::vector<char> ring_edge_flags(const chem::MolGraph& g) {
  // An edge is a ring edge iff it is not a bridge (removal keeps its
  // endpoints connected). Plain DFS bridge finding.
  const int n = g.atom_count();
  const auto& bonds = g.bonds();
  std::vector<char> ring(bonds.size(), 1);
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  int timer = 0;

  // bond index lookup per (i, j)
  auto bond_index = [&](int i, int j) {
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      if ((bonds[b].i == i && bonds[b].j == j) || (bonds[b].i == j && bonds[b].j == i))
        return b;
    }
    return bonds.size();
  };

  std::function<void(int, int)> dfs = [&](int u, int parent_edge) {
    disc[static_cast<std::size_t>(u)] = low[static_cast<std::size_t>(u)] = timer++;
    for (const auto& [v, o] : g.neighbors(u)) {
      const std::size_t be = bond_index(u, v);
      if (static_cast<int>(be) == parent_edge) continue;
      if (disc[static_cast<std::size_t>(v)] < 0) {
        dfs(v, static_cast<int>(be));
        low[static_cast<std::size_t>(u)] = std::min(low[static_cast<std::size_t>(u)], low[static_cast<std::size_t>(v)]);
        if (low[static_cast<std::size_t>(v)] > disc[static_cast<std::size_t>(u)]) ring[be] = 0;  // bridge
      } else {
        low[static_cast<std::size_t>(u)] = std::min(low[static_cast<std::size_t>(u)], disc[static_cast<std::size_t>(v)]);
      }
    }
  };
  for (int i = 0; i < n; ++i)
    if (disc[static_cast<std::size_t>(i)] < 0) dfs(i, -1);
  return ring;
}

DescriptorSet descriptors(const chem::MolGraph& g, const ContribTables& tables) {
  if (g.atom_count() == 0) throw EmptyGraph("descriptors of empty graph");
  DescriptorSet d;
  const double h_logp = hydrogen_rule_value(tables.logp);
  int total_h = 0;

  for (int i = 0; i < g.atom_count(); ++i) {
    const chem::Element e = g.atom(i);
    const int n_h = chem::implicit_hydrogens(g, i);
    total_h += n_h;
    d.mol_weight += chem::atomic_weight(e);
    const bool is_n_or_o = e == chem::Element::N || e == chem::Element::O;
    if (is_n_or_o) {
      ++d.hba;
      if (n_h >= 1) ++d.hbd;
    }
    bool has_double = false;
    for (const auto& [j, o] : g.neighbors(i))
      has_double |= o == chem::BondOrder::Double;
    const bool aromatic = g.has_aromatic_bond(i);
    d.logp_approx += apply_rules(tables.logp, e, aromatic, n_h, has_double, nullptr);
    d.tpsa_approx += apply_rules(tables.tpsa, e, aromatic, n_h, has_double, nullptr);
  }
  d.mol_weight += total_h * chem::kHydrogenWeight;
  d.logp_approx += total_h * h_logp;

  const auto ring = ring_edge_flags(g);
  const auto& bonds = g.bonds();
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (ring[b]) continue;
    if (bonds[b].order != chem::BondOrder::Single) continue;
    if (g.degree(bonds[b].i) >= 2 && g.degree(bonds[b].j) >= 2) ++d.rotatable_bonds;
  }
  return d;
}

bool lipinski_veber_pass(const DescriptorSet& d) {
  return d.mol_weight <= 500.0 && d.hbd <= 5 && d.hba <= 10 && d.logp_approx <= 5.0 &&
         d.rotatable_bonds <= 10 && d.tpsa_approx <= 140.0;
}

}  // namespace targen::metrics
