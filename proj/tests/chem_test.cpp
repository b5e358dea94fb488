//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cstdlib>
#include <random>
#include <set>
#include <string>

#include "support/isomorphism.hpp"
#include "targen/chem/dataset.hpp"
#include "targen/chem/matrices.hpp"
#include "targen/chem/molgraph.hpp"
#include "targen/chem/smiles.hpp"
#include "targen/errors.hpp"

using namespace targen;
using chem::BondOrder;
using chem::Element;
using chem::MolGraph;

namespace {

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("TARGEN_TEST_DATA");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/" + name;
}

MolGraph permuted(const MolGraph& g, const std::vector<int>& perm) {
  MolGraph h;
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
  for (std::size_t i = 0; i < perm.size(); ++i) h.add_atom(g.atom(perm[i]));
  for (const auto& b : g.bonds()) h.add_bond(inv[static_cast<std::size_t>(b.i)], inv[static_cast<std::size_t>(b.j)], b.order);
  return h;
}

std::vector<int> random_perm(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("parse single atom") {
  MolGraph g = chem::parse_smiles("C");
  CHECK(g.atom_count() == 1);
  CHECK(g.atom(0) == Element::C);
  CHECK(g.bonds().empty());
}

TEST_CASE("parse cumulated diene O=C=O") {
  MolGraph g = chem::parse_smiles("O=C=O");
  CHECK(g.atom_count() == 3);
  CHECK(g.bond(0, 1) == BondOrder::Double);
  CHECK(g.bond(1, 2) == BondOrder::Double);
  CHECK(g.bond(0, 2) == BondOrder::NoBond);
}

TEST_CASE("parse benzene: 6 carbons, 6 aromatic ring bonds") {
  MolGraph g = chem::parse_smiles("c1ccccc1");
  CHECK(g.atom_count() == 6);
  int aromatic = 0;
  for (const auto& b : g.bonds()) aromatic += b.order == BondOrder::Aromatic ? 1 : 0;
  CHECK(g.bonds().size() == 6);
  CHECK(aromatic == 6);
}

TEST_CASE("parser error taxonomy") {
  CHECK_THROWS_AS(chem::parse_smiles(""), SyntaxError);
  CHECK_THROWS_AS(chem::parse_smiles("C(("), SyntaxError);
  CHECK_THROWS_AS(chem::parse_smiles("C)"), SyntaxError);
  CHECK_THROWS_AS(chem::parse_smiles("C1CC"), SyntaxError);     // unclosed ring
  CHECK_THROWS_AS(chem::parse_smiles("C="), SyntaxError);       // dangling bond
  CHECK_THROWS_AS(chem::parse_smiles("C=%2"), SyntaxError);     // bad %nn
  CHECK_THROWS_AS(chem::parse_smiles("C=#C"), SyntaxError);     // two bonds
  CHECK_THROWS_AS(chem::parse_smiles("C/C=C/C"), UnsupportedFeature);  // stereo
  CHECK_THROWS_AS(chem::parse_smiles("[13C]"), UnsupportedFeature);    // isotope
  CHECK_THROWS_AS(chem::parse_smiles("[C@H](N)C"), UnsupportedFeature);
  CHECK_THROWS_AS(chem::parse_smiles("C*"), UnsupportedFeature);       // wildcard
  CHECK_THROWS_AS(chem::parse_smiles("CI"), UnsupportedFeature);       // iodine
  CHECK_THROWS_AS(chem::parse_smiles("[Se]C"), UnsupportedFeature);
  CHECK_THROWS_AS(chem::parse_smiles("[H]"), UnsupportedFeature);
  std::string too_big(46, 'C');
  CHECK_THROWS_AS(chem::parse_smiles(too_big), TooManyAtoms);
  CHECK_NOTHROW(chem::parse_smiles(std::string(45, 'C')));

  SUBCASE("syntax errors carry a position") {
    try {
      chem::parse_smiles("CC(C");
      FAIL("expected throw");
    } catch (const SyntaxError& e) {
      CHECK(e.pos() > 0);
    }
  }
}

TEST_CASE("parser totality on fuzzed garbage") {
  std::mt19937_64 rng(77);
  const std::string alphabet = "CcNnOoSs()[]=#%123456789.+-@/\\BrClKFPb aI*Hh";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(1, 24);
  for (int trial = 0; trial < 3000; ++trial) {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s += alphabet[pick(rng)];
    try {
      MolGraph g = chem::parse_smiles(s);
      CHECK(g.atom_count() >= 1);
    } catch (const Error&) {
      // structured failure is the contract
    }
  }
}

TEST_CASE("write single carbon") {
  MolGraph g;
  g.add_atom(Element::C);
  CHECK(chem::write_smiles(g) == "C");
}

TEST_CASE("write_smiles on empty graph throws") {
  MolGraph g;
  CHECK_THROWS_AS(chem::write_smiles(g), EmptyGraph);
}

TEST_CASE("corpus round trip: parse -> write -> parse is isomorphic") {
  const auto lines = chem::read_smiles_lines(data_path("corpus100.smi"));
  REQUIRE(lines.size() == 100);
  for (const std::string& smi : lines) {
    CAPTURE(smi);
    MolGraph g = chem::parse_smiles(smi);
    const std::string out = chem::write_smiles(g);
    CAPTURE(out);
    MolGraph h = chem::parse_smiles(out);
    CHECK(testsupport::isomorphic(g, h));
  }
}

TEST_CASE("permuted atom order produces identical canonical strings") {
  const auto lines = chem::read_smiles_lines(data_path("corpus100.smi"));
  std::mt19937_64 rng(13);
  for (std::size_t li = 0; li < lines.size(); li += 3) {
    CAPTURE(lines[li]);
    MolGraph g = chem::parse_smiles(lines[li]);
    const std::string ref = chem::write_smiles(g);
    for (int rep = 0; rep < 4; ++rep) {
      MolGraph h = permuted(g, random_perm(g.atom_count(), rng));
      CHECK(chem::write_smiles(h) == ref);
    }
  }
}

TEST_CASE("to_matrices basic encodings") {
  SUBCASE("single carbon") {
    auto m = chem::to_matrices(chem::parse_smiles("C"));
    CHECK(m.ann(0, static_cast<int>(Element::C)) == 1);
    for (int i = 1; i < chem::kMaxAtoms; ++i)
      CHECK(m.ann(i, static_cast<int>(Element::Null)) == 1);
    for (int i = 0; i < chem::kMaxAtoms; ++i)
      for (int j = 0; j < chem::kMaxAtoms; ++j)
        CHECK(m.adj(i, j, 0) == 1);
  }
  SUBCASE("C=O double bond, symmetric") {
    auto m = chem::to_matrices(chem::parse_smiles("C=O"));
    CHECK(m.adj(0, 1, static_cast<int>(BondOrder::Double)) == 1);
    CHECK(m.adj(1, 0, static_cast<int>(BondOrder::Double)) == 1);
    CHECK(m.adj(0, 1, 0) == 0);
  }
  SUBCASE("CCO has three non-null rows") {
    auto m = chem::to_matrices(chem::parse_smiles("CCO"));
    int non_null = 0;
    for (int i = 0; i < chem::kMaxAtoms; ++i)
      if (m.ann(i, static_cast<int>(Element::Null)) == 0) ++non_null;
    CHECK(non_null == 3);
  }
}

TEST_CASE("to_matrices adjacency symmetry on fuzzed corpus") {
  const auto lines = chem::read_smiles_lines(data_path("corpus100.smi"));
  std::mt19937_64 rng(5);
  for (std::size_t li = 0; li < lines.size(); li += 7) {
    MolGraph g = chem::parse_smiles(lines[li]);
    MolGraph h = permuted(g, random_perm(g.atom_count(), rng));
    auto m = chem::to_matrices(h);
    for (int i = 0; i < chem::kMaxAtoms; ++i)
      for (int j = 0; j < i; ++j)
        for (int k = 0; k < chem::kBondClasses; ++k)
          CHECK(m.adj(i, j, k) == m.adj(j, i, k));
  }
}

TEST_CASE("from_matrices inverts to_matrices up to isomorphism") {
  const auto lines = chem::read_smiles_lines(data_path("corpus100.smi"));
  for (const std::string& smi : lines) {
    CAPTURE(smi);
    MolGraph g = chem::parse_smiles(smi);
    MolGraph h = chem::from_matrices(chem::to_matrices(g));
    CHECK(testsupport::isomorphic(g, h));
  }
}

TEST_CASE("from_matrices edge cases") {
  SUBCASE("all-Null annotation decodes to empty graph") {
    chem::MolMatrices m;
    for (int i = 0; i < chem::kMaxAtoms; ++i) m.ann(i, static_cast<int>(Element::Null)) = 1;
    for (int i = 0; i < chem::kMaxAtoms; ++i)
      for (int j = 0; j < chem::kMaxAtoms; ++j) m.adj(i, j, 0) = 1;
    MolGraph g = chem::from_matrices(m);
    CHECK(g.atom_count() == 0);
    CHECK_THROWS_AS(chem::write_smiles(g), EmptyGraph);
  }
  SUBCASE("bond into a Null row raises InconsistentMatrix") {
    chem::MolMatrices m = chem::to_matrices(chem::parse_smiles("C"));
    m.adj(0, 40, 0) = 0;
    m.adj(0, 40, static_cast<int>(BondOrder::Single)) = 1;
    m.adj(40, 0, 0) = 0;
    m.adj(40, 0, static_cast<int>(BondOrder::Single)) = 1;
    CHECK_THROWS_AS(chem::from_matrices(m), InconsistentMatrix);
  }
}

TEST_CASE("check_validity rules") {
  SUBCASE("pentavalent carbon is invalid") {
    MolGraph g;
    g.add_atom(Element::C);
    for (int i = 0; i < 5; ++i) {
      g.add_atom(Element::C);
      g.add_bond(0, i + 1, BondOrder::Single);
    }
    CHECK_FALSE(chem::check_validity(g));
  }
  SUBCASE("carbon dioxide is valid") {
    CHECK(chem::check_validity(chem::parse_smiles("O=C=O")));
  }
  SUBCASE("benzene aromatic accounting is valid") {
    CHECK(chem::check_validity(chem::parse_smiles("c1ccccc1")));
  }
  SUBCASE("disconnected molecules are invalid") {
    CHECK_FALSE(chem::check_validity(chem::parse_smiles("C.CC")));
  }
  SUBCASE("empty graph is invalid") {
    MolGraph g;
    CHECK_FALSE(chem::check_validity(g));
  }
}

TEST_CASE("check_validity is permutation invariant") {
  const auto lines = chem::read_smiles_lines(data_path("corpus100.smi"));
  std::mt19937_64 rng(31);
  for (std::size_t li = 0; li < lines.size(); li += 5) {
    MolGraph g = chem::parse_smiles(lines[li]);
    const bool ref = chem::check_validity(g);
    for (int rep = 0; rep < 3; ++rep) {
      MolGraph h = permuted(g, random_perm(g.atom_count(), rng));
      CHECK(chem::check_validity(h) == ref);
    }
  }
}

TEST_CASE("batch_validity arithmetic") {
  std::vector<chem::MolMatrices> batch;
  for (int i = 0; i < 7; ++i) batch.push_back(chem::to_matrices(chem::parse_smiles("CCO")));
  // three invalid: pentavalent carbon star
  MolGraph bad;
  bad.add_atom(Element::C);
  for (int i = 0; i < 5; ++i) {
    bad.add_atom(Element::C);
    bad.add_bond(0, i + 1, BondOrder::Single);
  }
  for (int i = 0; i < 3; ++i) batch.push_back(chem::to_matrices(bad));
  CHECK(chem::batch_validity(batch) == doctest::Approx(0.7));

  std::vector<chem::MolMatrices> all_valid(batch.begin(), batch.begin() + 7);
  CHECK(chem::batch_validity(all_valid) == 1.0);

  std::vector<chem::MolMatrices> nulls(3);
  for (auto& m : nulls) {
    for (int i = 0; i < chem::kMaxAtoms; ++i) m.ann(i, static_cast<int>(Element::Null)) = 1;
    for (int i = 0; i < chem::kMaxAtoms; ++i)
      for (int j = 0; j < chem::kMaxAtoms; ++j) m.adj(i, j, 0) = 1;
  }
  CHECK(chem::batch_validity(nulls) == 0.0);

  CHECK_THROWS_AS(chem::batch_validity({}), EmptyBatch);
}

TEST_CASE("MOLM file round trip") {
  const auto lines = chem::read_smiles_lines(data_path("corpus100.smi"));
  std::vector<chem::MolMatrices> ms;
  for (std::size_t i = 0; i < 10; ++i) ms.push_back(chem::to_matrices(chem::parse_smiles(lines[i])));
  const std::string path = "/tmp/targen_test_molm.bin";
  chem::write_molm_file(path, ms);
  auto back = chem::read_molm_file(path);
  REQUIRE(back.size() == ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(back[i].annotation == ms[i].annotation);
    CHECK(back[i].adjacency == ms[i].adjacency);
  }
}

TEST_CASE("implicit hydrogen counts") {
  MolGraph methane = chem::parse_smiles("C");
  CHECK(chem::implicit_hydrogens(methane, 0) == 4);
  MolGraph ethanol = chem::parse_smiles("CCO");
  CHECK(chem::implicit_hydrogens(ethanol, 2) == 1);  // O-H
  MolGraph amine = chem::parse_smiles("CN");
  CHECK(chem::implicit_hydrogens(amine, 1) == 2);    // smallest valence 3
}
