//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/chem/dataset.hpp"

#include <sstream>

#include "targen/util.hpp"

namespace targen::chem {

std::vector<std::string> read_smiles_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    std::string trimmed = line.substr(first, last - first + 1);
    if (trimmed[0] == '#') continue;
    out.push_back(std::move(trimmed));
  }
  return out;
}

}  // namespace targen::chem
