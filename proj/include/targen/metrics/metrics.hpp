//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_METRICS_METRICS_HPP_
#define TARGEN_METRICS_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "targen/chem/molgraph.hpp"
#include "targen/metrics/descriptors.hpp"
#include "targen/metrics/fingerprint.hpp"

namespace targen::metrics {

// (# distinct canonical SMILES) / (# molecules).
double uniqueness(std::span<const chem::MolGraph> batch);  // EmptyBatch

// fraction of generated canonical SMILES absent from the training set.
double novelty(std::span<const chem::MolGraph> generated,
               std::span<const chem::MolGraph> training);  // EmptyBatch

// 1 - mean pairwise Tanimoto over unordered distinct pairs.
double int_div(std::span<const chem::MolGraph> batch);  // BatchTooSmall (< 2)

// Bemis-Murcko: drop terminal atoms until fixpoint; acyclic -> empty graph.
chem::MolGraph murcko_scaffold(const chem::MolGraph& g);

// Empirical 1-D Wasserstein-1 with exact quantile matching for unequal
// sizes. EmptySample on empty input.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

double max_tanimoto_to(const Fingerprint& fp, std::span<const Fingerprint> refs);

// Keeps generated molecules whose max Tanimoto to every reference is
// <= threshold (strictly-greater similarity is dropped). Order-preserving.
std::vector<chem::MolGraph> similarity_filter(std::span<const chem::MolGraph> generated,
                                              std::span<const chem::MolGraph> references,
                                              double threshold = 0.7);

struct MetricReport {
  double validity = 0.0;
  double uniqueness = 0.0;
  double novelty = 0.0;
  double int_div = 0.0;
  double filter_pass_rate = 0.0;  // Lipinski/Veber over valid generated
  std::map<std::string, double> wasserstein;  // per descriptor, vs inhibitors

  std::string to_csv() const;  // "metric,value" rows
};

// Assembles the benchmark report. Validity counts all generated entries;
// descriptor-based fields use the valid subset.
MetricReport report(std::span<const chem::MolGraph> generated,
                    std::span<const chem::MolGraph> training,
                    std::span<const chem::MolGraph> inhibitors,
                    const ContribTables& tables = ContribTables::builtin());

}  // namespace targen::metrics

#endif  // TARGEN_METRICS_METRICS_HPP_
