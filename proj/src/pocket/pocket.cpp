//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/pocket/pocket.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "targen/errors.hpp"
#include "targen/util.hpp"

namespace targen::pocket {
namespace {

constexpr std::string_view kEdgeNames[kPocketEdgeClasses] = {
    "NoEdge", "Single", "Double", "Triple", "AromaticCov",
    "Ionic", "HBond", "CationPi", "Hydrophobic", "PiStacking", "TStacking"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double dist2(const AtomRecord& a, const AtomRecord& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

// Polar hydrogens by (residue, name); everything else merges away (Null).
bool is_polar_hydrogen(const std::string& residue, const std::string& name) {
  static const std::set<std::string> backbone = {"H", "H1", "H2", "H3", "HN"};
  if (backbone.contains(name)) return true;
  static const std::multimap<std::string, std::string> side = {
      {"SER", "HG"},  {"THR", "HG1"}, {"TYR", "HH"},  {"CYS", "HG"},
      {"LYS", "HZ1"}, {"LYS", "HZ2"}, {"LYS", "HZ3"}, {"ARG", "HE"},
      {"ARG", "HH11"}, {"ARG", "HH12"}, {"ARG", "HH21"}, {"ARG", "HH22"},
      {"TRP", "HE1"}, {"ASN", "HD21"}, {"ASN", "HD22"}, {"GLN", "HE21"},
      {"GLN", "HE22"}, {"HIS", "HD1"}, {"HIS", "HE2"}, {"HOH", "H1"},
      {"HOH", "H2"}};
  auto [lo, hi] = side.equal_range(residue);
  for (auto it = lo; it != hi; ++it)
    if (it->second == name) return true;
  return false;
}

bool is_aromatic_carbon(const std::string& residue, const std::string& name) {
  static const std::multimap<std::string, std::string> ring = {
      {"PHE", "CG"}, {"PHE", "CD1"}, {"PHE", "CD2"}, {"PHE", "CE1"}, {"PHE", "CE2"}, {"PHE", "CZ"},
      {"TYR", "CG"}, {"TYR", "CD1"}, {"TYR", "CD2"}, {"TYR", "CE1"}, {"TYR", "CE2"}, {"TYR", "CZ"},
      {"TRP", "CG"}, {"TRP", "CD1"}, {"TRP", "CD2"}, {"TRP", "CE2"}, {"TRP", "CE3"},
      {"TRP", "CZ2"}, {"TRP", "CZ3"}, {"TRP", "CH2"},
      {"HIS", "CG"}, {"HIS", "CD2"}, {"HIS", "CE1"}};
  auto [lo, hi] = ring.equal_range(residue);
  for (auto it = lo; it != hi; ++it)
    if (it->second == name) return true;
  return false;
}

bool is_acceptor_nitrogen(const std::string& residue, const std::string& name) {
  return residue == "HIS" && (name == "ND1" || name == "NE2");
}

bool is_anionic(const AtomRecord& a) {
  return (a.residue == "ASP" && (a.name == "OD1" || a.name == "OD2")) ||
         (a.residue == "GLU" && (a.name == "OE1" || a.name == "OE2"));
}

bool is_cationic(const AtomRecord& a) {
  return (a.residue == "LYS" && a.name == "NZ") ||
         (a.residue == "ARG" && (a.name == "NH1" || a.name == "NH2" || a.name == "NE")) ||
         (a.residue == "HIS" && (a.name == "ND1" || a.name == "NE2"));
}

std::string element_of(const AtomRecord& a) {
  if (!a.element.empty()) return a.element;
  // heuristic fallback: first alphabetic character of the name
  for (char c : a.name)
    if (std::isalpha(static_cast<unsigned char>(c)))
      return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return "";
}

template <typename T>
void put_u16(std::string& out, T v) {
  const auto u = static_cast<std::uint16_t>(v);
  out.push_back(static_cast<char>(u & 0xff));
  out.push_back(static_cast<char>((u >> 8) & 0xff));
}

std::uint16_t get_u16(const std::string& buf, std::size_t& off) {
  if (off + 2 > buf.size()) throw DataError("truncated POKM record");
  const auto lo = static_cast<std::uint8_t>(buf[off]);
  const auto hi = static_cast<std::uint8_t>(buf[off + 1]);
  off += 2;
  return static_cast<std::uint16_t>(lo | (hi << 8));
}

}  // namespace

std::string_view pocket_edge_name(PocketEdgeType t) {
  return kEdgeNames[static_cast<std::size_t>(t)];
}

std::optional<PocketEdgeType> pocket_edge_from_name(std::string_view s) {
  for (int i = 0; i < kPocketEdgeClasses; ++i)
    if (kEdgeNames[static_cast<std::size_t>(i)] == s) return static_cast<PocketEdgeType>(i);
  return std::nullopt;
}

std::vector<AtomRecord> parse_pdb_atoms(const std::string& text) {
  std::vector<AtomRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool atom = line.rfind("ATOM  ", 0) == 0;
    const bool het = line.rfind("HETATM", 0) == 0;
    if (!atom && !het) continue;
    if (line.size() < 54) throw MalformedRecord(lineno, "record shorter than 54 columns");
    AtomRecord r;
    r.hetatm = het;
    auto field = [&](std::size_t col1, std::size_t col2) {  // 1-based inclusive
      return trim(std::string_view(line).substr(col1 - 1, col2 - col1 + 1));
    };
    try {
      r.serial = std::stoi(field(7, 11));
    } catch (...) {
      throw MalformedRecord(lineno, "bad serial field");
    }
    r.name = field(13, 16);
    r.residue = field(18, 20);
    r.chain = line[21];
    auto coord = [&](std::size_t c1, std::size_t c2, const char* what) {
      const std::string f = field(c1, c2);
      try {
        std::size_t used = 0;
        const double v = std::stod(f, &used);
        if (used != f.size() || !std::isfinite(v)) throw std::invalid_argument(what);
        return v;
      } catch (...) {
        throw MalformedRecord(lineno, std::string("bad ") + what + " coordinate");
      }
    };
    r.x = coord(31, 38, "x");
    r.y = coord(39, 46, "y");
    r.z = coord(47, 54, "z");
    if (line.size() >= 78) r.element = field(77, 78);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AtomRecord> extract_binding_site(std::span<const AtomRecord> protein,
                                             std::span<const AtomRecord> ligand,
                                             double cutoff) {
  if (ligand.empty()) throw EmptyLigand("no ligand atoms for binding-site extraction");
  if (cutoff < 0) throw DataError("negative cutoff");
  const double c2 = cutoff * cutoff;
  std::vector<AtomRecord> out;
  for (const AtomRecord& p : protein) {
    for (const AtomRecord& l : ligand) {
      if (dist2(p, l) <= c2) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

std::vector<PocketAtomType> assign_atom_types(std::span<const AtomRecord> atoms) {
  std::vector<PocketAtomType> out;
  out.reserve(atoms.size());
  for (const AtomRecord& a : atoms) {
    const std::string el = element_of(a);
    PocketAtomType t = PocketAtomType::Null;
    if (el == "H") {
      t = is_polar_hydrogen(a.residue, a.name) ? PocketAtomType::HD : PocketAtomType::Null;
    } else if (el == "C") {
      t = is_aromatic_carbon(a.residue, a.name) ? PocketAtomType::A : PocketAtomType::C;
    } else if (el == "N") {
      t = is_acceptor_nitrogen(a.residue, a.name) ? PocketAtomType::NA : PocketAtomType::N;
    } else if (el == "O") {
      t = PocketAtomType::OA;
    } else if (el == "S") {
      t = PocketAtomType::SA;
    }
    out.push_back(t);
  }
  return out;
}

PocketEdgeType PocketGraph::edge(int i, int j) const {
  for (const PocketEdge& e : edges_) {
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return e.type;
  }
  return PocketEdgeType::NoEdge;
}

int PocketGraph::add_atom(PocketAtom a) {
  if (atom_count() >= kPocketAtoms)
    throw TooManyAtoms("pocket exceeds " + std::to_string(kPocketAtoms) + " atoms");
  atoms_.push_back(a);
  return atom_count() - 1;
}

void PocketGraph::add_edge(int i, int j, PocketEdgeType t) {
  if (i == j) throw DataError("self edge at pocket atom " + std::to_string(i));
  if (i < 0 || j < 0 || i >= atom_count() || j >= atom_count())
    throw EdgeIndexOutOfRange("pocket edge " + std::to_string(i) + "-" + std::to_string(j));
  if (t == PocketEdgeType::NoEdge) throw DataError("NoEdge cannot be added");
  if (edge(i, j) != PocketEdgeType::NoEdge)
    throw DataError("duplicate pocket edge " + std::to_string(i) + "-" + std::to_string(j));
  edges_.push_back({std::min(i, j), std::max(i, j), t});
}

PocketGraph build_pocket_graph(std::span<const AtomRecord> atoms,
                               std::span<const PocketAtomType> typed,
                               const std::vector<ExternalEdge>* covalent_edges,
                               const std::vector<ExternalEdge>* noncovalent_edges) {
  if (atoms.size() != typed.size())
    throw DataError("atom/type lists not aligned");
  PocketGraph g;
  for (std::size_t k = 0; k < atoms.size(); ++k)
    g.add_atom({typed[k], atoms[k].x, atoms[k].y, atoms[k].z});

  auto ingest = [&](const std::vector<ExternalEdge>& edges) {
    // duplicate (i,j) entries must agree in type; symmetric pairs merge
    std::map<std::pair<int, int>, PocketEdgeType> seen;
    for (const ExternalEdge& e : edges) {
      if (e.i < 0 || e.j < 0 || e.i >= g.atom_count() || e.j >= g.atom_count())
        throw EdgeIndexOutOfRange("edge " + std::to_string(e.i) + "-" + std::to_string(e.j) +
                                  " outside " + std::to_string(g.atom_count()) + " atoms");
      if (e.i == e.j) throw DataError("self edge in edge list");
      const auto key = std::minmax(e.i, e.j);
      auto [it, inserted] = seen.emplace(std::pair{key.first, key.second}, e.type);
      if (!inserted && it->second != e.type)
        throw AsymmetricEdgeList("edge " + std::to_string(e.i) + "-" + std::to_string(e.j) +
                                 " listed with conflicting types");
    }
    for (const auto& [key, t] : seen) g.add_edge(key.first, key.second, t);
  };

  if (covalent_edges != nullptr || noncovalent_edges != nullptr) {
    if (covalent_edges) ingest(*covalent_edges);
    if (noncovalent_edges) ingest(*noncovalent_edges);
    return g;
  }

  // Fallback inference. Covalent first: heavy-heavy pairs within 1.9 A.
  const int n = g.atom_count();
  auto is_heavy = [&](int i) { return typed[static_cast<std::size_t>(i)] != PocketAtomType::HD &&
                                      element_of(atoms[static_cast<std::size_t>(i)]) != "H"; };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!is_heavy(i) || !is_heavy(j)) continue;
      if (dist2(atoms[static_cast<std::size_t>(i)], atoms[static_cast<std::size_t>(j)]) <= 1.9 * 1.9)
        g.add_edge(i, j, PocketEdgeType::Single);
    }
  }
  // Non-covalent heuristics on the remaining pairs: Ionic > HBond > Hydrophobic.
  auto acceptor = [&](int i) {
    const PocketAtomType t = typed[static_cast<std::size_t>(i)];
    return t == PocketAtomType::OA || t == PocketAtomType::NA || t == PocketAtomType::SA;
  };
  auto carbon = [&](int i) {
    const PocketAtomType t = typed[static_cast<std::size_t>(i)];
    return t == PocketAtomType::C || t == PocketAtomType::A;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.edge(i, j) != PocketEdgeType::NoEdge) continue;
      const double d2 = dist2(atoms[static_cast<std::size_t>(i)], atoms[static_cast<std::size_t>(j)]);
      const AtomRecord& ai = atoms[static_cast<std::size_t>(i)];
      const AtomRecord& aj = atoms[static_cast<std::size_t>(j)];
      if (d2 <= 4.0 * 4.0 &&
          ((is_anionic(ai) && is_cationic(aj)) || (is_cationic(ai) && is_anionic(aj)))) {
        g.add_edge(i, j, PocketEdgeType::Ionic);
        continue;
      }
      const bool hd_i = typed[static_cast<std::size_t>(i)] == PocketAtomType::HD;
      const bool hd_j = typed[static_cast<std::size_t>(j)] == PocketAtomType::HD;
      if (d2 <= 3.5 * 3.5 && ((hd_i && acceptor(j)) || (hd_j && acceptor(i)))) {
        g.add_edge(i, j, PocketEdgeType::HBond);
        continue;
      }
      if (d2 <= 4.0 * 4.0 && carbon(i) && carbon(j)) {
        g.add_edge(i, j, PocketEdgeType::Hydrophobic);
      }
    }
  }
  return g;
}

std::vector<ExternalEdge> read_edge_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<ExternalEdge> out;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {  // "i,j,edge_type"
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string si, sj, st;
    if (!std::getline(ls, si, ',') || !std::getline(ls, sj, ',') || !std::getline(ls, st))
      throw DataError("edge CSV line " + std::to_string(lineno) + ": need i,j,edge_type");
    ExternalEdge e;
    try {
      e.i = std::stoi(si);
      e.j = std::stoi(sj);
    } catch (...) {
      throw DataError("edge CSV line " + std::to_string(lineno) + ": bad index");
    }
    const std::string t = trim(st);
    if (auto by_name = pocket_edge_from_name(t)) {
      e.type = *by_name;
    } else {
      try {
        const int idx = std::stoi(t);
        if (idx < 1 || idx >= kPocketEdgeClasses) throw std::out_of_range("edge type");
        e.type = static_cast<PocketEdgeType>(idx);
      } catch (...) {
        throw DataError("edge CSV line " + std::to_string(lineno) + ": unknown edge type '" + t + "'");
      }
    }
    if (e.type == PocketEdgeType::NoEdge)
      throw DataError("edge CSV line " + std::to_string(lineno) + ": NoEdge is not a valid edge");
    out.push_back(e);
  }
  return out;
}

PocketMatrices pocket_to_matrices(const PocketGraph& p) {
  if (p.atom_count() > kPocketAtoms) throw TooManyAtoms("pocket larger than matrix");
  PocketMatrices m;
  for (int i = 0; i < kPocketAtoms; ++i) {
    const int cls = i < p.atom_count() ? static_cast<int>(p.atoms()[static_cast<std::size_t>(i)].type)
                                       : static_cast<int>(PocketAtomType::Null);
    m.ann(i, cls) = 1;
  }
  for (int i = 0; i < kPocketAtoms; ++i)
    for (int j = 0; j < kPocketAtoms; ++j) m.adj(i, j, 0) = 1;
  for (const PocketEdge& e : p.edges()) {
    m.adj(e.i, e.j, 0) = 0;
    m.adj(e.j, e.i, 0) = 0;
    m.adj(e.i, e.j, static_cast<int>(e.type)) = 1;
    m.adj(e.j, e.i, static_cast<int>(e.type)) = 1;
  }
  return m;
}

void write_pokm_file(const std::string& path, const PocketMatrices& m) {
  std::string buf;
  buf.reserve(16 + m.annotation.size() + m.adjacency.size());
  buf.append("POKM", 4);
  put_u16(buf, kPocketAtoms);
  put_u16(buf, kPocketClasses);
  buf.append(reinterpret_cast<const char*>(m.annotation.data()), m.annotation.size());
  put_u16(buf, kPocketAtoms);
  put_u16(buf, kPocketAtoms);
  put_u16(buf, kPocketEdgeClasses);
  buf.append(reinterpret_cast<const char*>(m.adjacency.data()), m.adjacency.size());
  write_file_atomic(path, buf);
}

PocketMatrices read_pokm_file(const std::string& path) {
  const std::string buf = read_file(path);
  std::size_t off = 0;
  if (buf.size() < 4 || std::memcmp(buf.data(), "POKM", 4) != 0)
    throw DataError("bad POKM magic in " + path);
  off += 4;
  if (get_u16(buf, off) != kPocketAtoms || get_u16(buf, off) != kPocketClasses)
    throw DataError("POKM annotation dims mismatch");
  PocketMatrices m;
  if (off + m.annotation.size() > buf.size()) throw DataError("truncated POKM annotation");
  std::memcpy(m.annotation.data(), buf.data() + off, m.annotation.size());
  off += m.annotation.size();
  if (get_u16(buf, off) != kPocketAtoms || get_u16(buf, off) != kPocketAtoms ||
      get_u16(buf, off) != kPocketEdgeClasses)
    throw DataError("POKM adjacency dims mismatch");
  if (off + m.adjacency.size() > buf.size()) throw DataError("truncated POKM adjacency");
  std::memcpy(m.adjacency.data(), buf.data() + off, m.adjacency.size());
  return m;
}

}  // namespace targen::pocket
