//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_CHEM_DATASET_HPP_
#define TARGEN_CHEM_DATASET_HPP_

#include <string>
#include <vector>

namespace targen::chem {

// SMILES dataset file: one SMILES per line, '#' comment lines and blank
// lines ignored, surrounding whitespace trimmed.
std::vector<std::string> read_smiles_lines(const std::string& path);

}  // namespace targen::chem

#endif  // TARGEN_CHEM_DATASET_HPP_
