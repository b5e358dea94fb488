//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_METRICS_DESCRIPTORS_HPP_
#define TARGEN_METRICS_DESCRIPTORS_HPP_

#include <string>
#include <vector>

#include "targen/chem/molgraph.hpp"

namespace targen::metrics {

struct DescriptorSet {
  double mol_weight = 0.0;   // Da, implicit hydrogens included
  int hbd = 0;               // N/O with >= 1 implicit H
  int hba = 0;               // all N and O
  int rotatable_bonds = 0;   // non-ring single bonds, both ends degree >= 2
  double logp_approx = 0.0;  // per-atom-type contribution table
  double tpsa_approx = 0.0;  // per-atom-type contribution table (A^2)
};

// Per-atom-type contribution rules; first matching row wins.
// Patterns: aromatic in {-1 any, 0, 1}; n_h in {-1 any, 0, 1, 2 = ">=2"};
// has_double in {-1 any, 0, 1}.
struct ContribRule {
  chem::Element element;
  int aromatic;
  int n_h;
  int has_double;
  double value;
  bool per_hydrogen;  // logP: contribution per implicit H, attached to "H" rows
};

struct ContribTables {
  std::vector<ContribRule> logp;
  std::vector<ContribRule> tpsa;

  // Built-in defaults (identical to the shipped share/*.tsv files).
  static const ContribTables& builtin();
  // Parse the shipped TSV format; throws DataError.
  static ContribTables load(const std::string& logp_path, const std::string& tpsa_path);
};

DescriptorSet descriptors(const chem::MolGraph& g,
                          const ContribTables& tables = ContribTables::builtin());

// Lipinski + Veber, all thresholds inclusive:
// weight <= 500, hbd <= 5, hba <= 10, logP <= 5, rot <= 10, TPSA <= 140.
bool lipinski_veber_pass(const DescriptorSet& d);

// Ring-edge detection (non-bridge edges); shared by descriptors/scaffold.
std::vector<char> ring_edge_flags(const chem::MolGraph& g);  // aligned to g.bonds()

}  // namespace targen::metrics

#endif  // TARGEN_METRICS_DESCRIPTORS_HPP_
