//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_CHEM_MATRICES_HPP_
#define TARGEN_CHEM_MATRICES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "targen/chem/molgraph.hpp"

namespace targen::chem {

// One-hot encoding of a molecule at fixed size: 45x13 annotation and
// 45x45x5 adjacency. Rows past the atom count are Null; fibers touching a
// Null row (and the diagonal) are NoBond.
struct MolMatrices {
  std::vector<std::uint8_t> annotation;  // 45*13
  std::vector<std::uint8_t> adjacency;   // 45*45*5

  MolMatrices()
      : annotation(kMaxAtoms * kAtomClasses, 0),
        adjacency(kMaxAtoms * kMaxAtoms * kBondClasses, 0) {}

  std::uint8_t& ann(int i, int c) { return annotation[static_cast<std::size_t>(i * kAtomClasses + c)]; }
  std::uint8_t ann(int i, int c) const { return annotation[static_cast<std::size_t>(i * kAtomClasses + c)]; }
  std::uint8_t& adj(int i, int j, int k) {
    return adjacency[static_cast<std::size_t>((i * kMaxAtoms + j) * kBondClasses + k)];
  }
  std::uint8_t adj(int i, int j, int k) const {
    return adjacency[static_cast<std::size_t>((i * kMaxAtoms + j) * kBondClasses + k)];
  }

  int atom_class(int i) const;  // argmax of row i
  int bond_class(int i, int j) const;
};

MolMatrices to_matrices(const MolGraph& g);

// Inverse of to_matrices up to isomorphism. Null rows are skipped (indices
// compact); a non-NoBond fiber touching a Null row or the diagonal raises
// InconsistentMatrix. Reads the upper triangle (symmetry is an input
// invariant).
MolGraph from_matrices(const MolMatrices& m);

// Mean validity of decoded molecules; decode failures count invalid.
double batch_validity(const std::vector<MolMatrices>& batch);  // EmptyBatch

// MOLM record: magic "MOLM", u8 dims {45,13}, annotation bytes, u8 dims
// {45,45,5}, adjacency bytes. A file is a plain concatenation of records.
void append_molm(std::string& out, const MolMatrices& m);
MolMatrices read_molm(const std::string& buf, std::size_t& off);
std::vector<MolMatrices> read_molm_file(const std::string& path);
void write_molm_file(const std::string& path, const std::vector<MolMatrices>& ms);

}  // namespace targen::chem

#endif  // TARGEN_CHEM_MATRICES_HPP_
