//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/chem/matrices.hpp"

#include <cstring>

#include "targen/errors.hpp"
#include "targen/util.hpp"

namespace targen::chem {

namespace {

int argmax_u8(const std::uint8_t* p, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (p[i] > p[best]) best = i;
  return best;
}

}  // namespace

int MolMatrices::atom_class(int i) const {
  return argmax_u8(annotation.data() + i * kAtomClasses, kAtomClasses);
}

int MolMatrices::bond_class(int i, int j) const {
  return argmax_u8(adjacency.data() + (i * kMaxAtoms + j) * kBondClasses, kBondClasses);
}

MolMatrices to_matrices(const MolGraph& g) {
  MolMatrices m;
  const int n = g.atom_count();
  for (int i = 0; i < kMaxAtoms; ++i) {
    const int cls = i < n ? static_cast<int>(g.atom(i)) : static_cast<int>(Element::Null);
    m.ann(i, cls) = 1;
  }
  for (int i = 0; i < kMaxAtoms; ++i)
    for (int j = 0; j < kMaxAtoms; ++j) m.adj(i, j, 0) = 1;  // NoBond everywhere
  for (const Bond& b : g.bonds()) {
    m.adj(b.i, b.j, 0) = 0;
    m.adj(b.j, b.i, 0) = 0;
    m.adj(b.i, b.j, static_cast<int>(b.order)) = 1;
    m.adj(b.j, b.i, static_cast<int>(b.order)) = 1;
  }
  return m;
}

MolGraph from_matrices(const MolMatrices& m) {
  MolGraph g;
  std::vector<int> atom_of(kMaxAtoms, -1);
  for (int i = 0; i < kMaxAtoms; ++i) {
    const int cls = m.atom_class(i);
    if (cls != static_cast<int>(Element::Null))
      atom_of[static_cast<std::size_t>(i)] = g.add_atom(static_cast<Element>(cls));
  }
  for (int i = 0; i < kMaxAtoms; ++i) {
    for (int j = i; j < kMaxAtoms; ++j) {
      const int cls = m.bond_class(i, j);
      if (cls == static_cast<int>(BondOrder::NoBond)) continue;
      if (i == j)
        throw InconsistentMatrix("bond on diagonal at row " + std::to_string(i));
      const int a = atom_of[static_cast<std::size_t>(i)];
      const int b = atom_of[static_cast<std::size_t>(j)];
      if (a < 0 || b < 0)
        throw InconsistentMatrix("bond " + std::to_string(i) + "-" + std::to_string(j) +
                                 " touches a Null row");
      g.add_bond(a, b, static_cast<BondOrder>(cls));
    }
  }
  return g;
}

double batch_validity(const std::vector<MolMatrices>& batch) {
  if (batch.empty()) throw EmptyBatch("batch_validity of empty batch");
  int valid = 0;
  for (const MolMatrices& m : batch) {
    try {
      if (check_validity(from_matrices(m))) ++valid;
    } catch (const DataError&) {
      // decode failure counts as invalid
    }
  }
  return static_cast<double>(valid) / static_cast<double>(batch.size());
}

void append_molm(std::string& out, const MolMatrices& m) {
  out.append("MOLM", 4);
  const char ann_dims[2] = {static_cast<char>(kMaxAtoms), static_cast<char>(kAtomClasses)};
  out.append(ann_dims, 2);
  out.append(reinterpret_cast<const char*>(m.annotation.data()), m.annotation.size());
  const char adj_dims[3] = {static_cast<char>(kMaxAtoms), static_cast<char>(kMaxAtoms),
                            static_cast<char>(kBondClasses)};
  out.append(adj_dims, 3);
  out.append(reinterpret_cast<const char*>(m.adjacency.data()), m.adjacency.size());
}

MolMatrices read_molm(const std::string& buf, std::size_t& off) {
  auto need = [&](std::size_t n) {
    if (off + n > buf.size()) throw DataError("truncated MOLM record");
  };
  need(4);
  if (std::memcmp(buf.data() + off, "MOLM", 4) != 0) throw DataError("bad MOLM magic");
  off += 4;
  need(2);
  if (static_cast<unsigned char>(buf[off]) != kMaxAtoms ||
      static_cast<unsigned char>(buf[off + 1]) != kAtomClasses)
    throw DataError("MOLM annotation dims mismatch");
  off += 2;
  MolMatrices m;
  need(m.annotation.size());
  std::memcpy(m.annotation.data(), buf.data() + off, m.annotation.size());
  off += m.annotation.size();
  need(3);
  if (static_cast<unsigned char>(buf[off]) != kMaxAtoms ||
      static_cast<unsigned char>(buf[off + 1]) != kMaxAtoms ||
      static_cast<unsigned char>(buf[off + 2]) != kBondClasses)
    throw DataError("MOLM adjacency dims mismatch");
  off += 3;
  need(m.adjacency.size());
  std::memcpy(m.adjacency.data(), buf.data() + off, m.adjacency.size());
  off += m.adjacency.size();
  return m;
}

std::vector<MolMatrices> read_molm_file(const std::string& path) {
  const std::string buf = read_file(path);
  std::vector<MolMatrices> out;
  std::size_t off = 0;
  while (off < buf.size()) out.push_back(read_molm(buf, off));
  return out;
}

void write_molm_file(const std::string& path, const std::vector<MolMatrices>& ms) {
  std::string buf;
  buf.reserve(ms.size() * 10719);
  for (const MolMatrices& m : ms) append_molm(buf, m);
  write_file_atomic(path, buf);
}

}  // namespace targen::chem
