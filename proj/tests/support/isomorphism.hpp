//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_TESTS_SUPPORT_ISOMORPHISM_HPP_
#define TARGEN_TESTS_SUPPORT_ISOMORPHISM_HPP_

#include "targen/chem/molgraph.hpp"

namespace targen::testsupport {

// Label- and bond-preserving graph isomorphism by plain backtracking.
// Deliberately independent of the writer's canonicalization so round-trip
// tests have a second opinion.
bool isomorphic(const chem::MolGraph& a, const chem::MolGraph& b);

}  // namespace targen::testsupport

#endif  // TARGEN_TESTS_SUPPORT_ISOMORPHISM_HPP_
