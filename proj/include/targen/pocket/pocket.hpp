//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_POCKET_POCKET_HPP_
#define TARGEN_POCKET_POCKET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace targen::pocket {

// Reduced atom types (PDBQT-style): 7 + Null, fixed column order.
enum class PocketAtomType : std::uint8_t {
  C = 0,   // aliphatic carbon
  N,       // non H-bonding nitrogen
  OA,      // acceptor oxygen
  A,       // aromatic carbon
  SA,      // acceptor sulphur
  NA,      // acceptor nitrogen
  HD,      // donor hydrogen
  Null = 7,
};

inline constexpr int kPocketClasses = 8;
inline constexpr int kPocketAtoms = 450;
inline constexpr int kPocketEdgeClasses = 11;

// 4 covalent + 6 non-covalent edge types; NoEdge at channel 0.
enum class PocketEdgeType : std::uint8_t {
  NoEdge = 0, Single, Double, Triple, AromaticCov,
  Ionic, HBond, CationPi, Hydrophobic, PiStacking, TStacking,
};

std::string_view pocket_edge_name(PocketEdgeType t);
std::optional<PocketEdgeType> pocket_edge_from_name(std::string_view s);

struct AtomRecord {
  int serial = 0;
  std::string name;      // trimmed, e.g. "CA"
  std::string residue;   // e.g. "ALA"
  char chain = ' ';
  double x = 0, y = 0, z = 0;  // Angstroms
  std::string element;   // trimmed, e.g. "C"
  bool hetatm = false;   // ligand candidate flag
};

// Fixed-column ATOM/HETATM parsing; other record types are skipped.
// MalformedRecord (with line number) on column violations.
std::vector<AtomRecord> parse_pdb_atoms(const std::string& text);

// Protein atoms whose minimum distance to any ligand atom is <= cutoff
// (inclusive). EmptyLigand if the ligand has no atoms.
std::vector<AtomRecord> extract_binding_site(std::span<const AtomRecord> protein,
                                             std::span<const AtomRecord> ligand,
                                             double cutoff);

// Deterministic (element, residue, name) rule table; unmappable -> Null.
std::vector<PocketAtomType> assign_atom_types(std::span<const AtomRecord> atoms);

struct PocketAtom {
  PocketAtomType type = PocketAtomType::Null;
  double x = 0, y = 0, z = 0;
};

struct PocketEdge {
  int i;  // i < j
  int j;
  PocketEdgeType type;
};

class PocketGraph {
public:
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const std::vector<PocketAtom>& atoms() const { return atoms_; }
  const std::vector<PocketEdge>& edges() const { return edges_; }
  PocketEdgeType edge(int i, int j) const;

  int add_atom(PocketAtom a);                      // TooManyAtoms past 450
  void add_edge(int i, int j, PocketEdgeType t);   // validates

private:
  std::vector<PocketAtom> atoms_;
  std::vector<PocketEdge> edges_;
};

struct ExternalEdge {
  int i = 0;
  int j = 0;
  PocketEdgeType type = PocketEdgeType::NoEdge;
};

// External edge lists (when given) are validated and used verbatim.
// Fallback: covalent Single for heavy-atom pairs <= 1.9 A; non-covalent by
// the documented geometric heuristics (Ionic > HBond > Hydrophobic when
// rules overlap). CationPi/PiStacking/TStacking come only from edge files.
PocketGraph build_pocket_graph(std::span<const AtomRecord> atoms,
                               std::span<const PocketAtomType> typed,
                               const std::vector<ExternalEdge>* covalent_edges = nullptr,
                               const std::vector<ExternalEdge>* noncovalent_edges = nullptr);

// Pocket edge CSV: header line, then rows "i,j,edge_type" (type by name or
// channel index), indices into the extracted atom list.
std::vector<ExternalEdge> read_edge_csv(const std::string& path);

struct PocketMatrices {
  std::vector<std::uint8_t> annotation;  // 450*8
  std::vector<std::uint8_t> adjacency;   // 450*450*11

  PocketMatrices()
      : annotation(kPocketAtoms * kPocketClasses, 0),
        adjacency(static_cast<std::size_t>(kPocketAtoms) * kPocketAtoms * kPocketEdgeClasses, 0) {}

  std::uint8_t& ann(int i, int c) { return annotation[static_cast<std::size_t>(i * kPocketClasses + c)]; }
  std::uint8_t ann(int i, int c) const { return annotation[static_cast<std::size_t>(i * kPocketClasses + c)]; }
  std::uint8_t& adj(int i, int j, int k) {
    return adjacency[(static_cast<std::size_t>(i) * kPocketAtoms + static_cast<std::size_t>(j)) * kPocketEdgeClasses +
                     static_cast<std::size_t>(k)];
  }
  std::uint8_t adj(int i, int j, int k) const {
    return adjacency[(static_cast<std::size_t>(i) * kPocketAtoms + static_cast<std::size_t>(j)) * kPocketEdgeClasses +
                     static_cast<std::size_t>(k)];
  }
};

PocketMatrices pocket_to_matrices(const PocketGraph& p);  // TooManyAtoms

// POKM record: magic "POKM", u16-LE dims {450,8}, annotation bytes,
// u16-LE dims {450,450,11}, adjacency bytes. (Mirrors MOLM; dims are u16
// because 450 does not fit in a byte.)
void write_pokm_file(const std::string& path, const PocketMatrices& m);
PocketMatrices read_pokm_file(const std::string& path);

}  // namespace targen::pocket

#endif  // TARGEN_POCKET_POCKET_HPP_
