//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_CHEM_SMILES_HPP_
#define TARGEN_CHEM_SMILES_HPP_

#include <string>
#include <string_view>

#include "targen/chem/molgraph.hpp"

namespace targen::chem {

// Grammar subset: organic-subset atoms (B C N O P S F Cl Br), aromatic
// lowercase (b c n o p s), bracket atoms over the 12-element alphabet with
// optional H count and charge (both dropped; the graph is heavy-atom only),
// bonds - = # :, branches, ring closures 1-9 and %nn, and the component
// separator '.'. Stereo markers, isotopes, wildcards, atom maps and
// out-of-alphabet elements raise UnsupportedFeature; anything else malformed
// raises SyntaxError with the offending position.
MolGraph parse_smiles(std::string_view text);

// Canonical writer: Morgan-style iterative refinement over (element, degree,
// bond-order multiset) with lexicographic-string tie-breaking, so isomorphic
// graphs print identically. parse_smiles(write_smiles(g)) is isomorphic to g.
std::string write_smiles(const MolGraph& g);  // throws EmptyGraph on 0 atoms

}  // namespace targen::chem

#endif  // TARGEN_CHEM_SMILES_HPP_
