//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include "targen/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "targen/chem/smiles.hpp"
#include "targen/errors.hpp"

namespace targen::metrics {

double uniqueness(std::span<const chem::MolGraph> batch) {
  if (batch.empty()) throw EmptyBatch("uniqueness of empty batch");
  std::set<std::string> canon;
  for (const chem::MolGraph& g : batch) canon.insert(chem::write_smiles(g));
  return static_cast<double>(canon.size()) / static_cast<double>(batch.size());
}

double novelty(std::span<const chem::MolGraph> generated,
               std::span<const chem::MolGraph> training) {
  if (generated.empty() || training.empty()) throw EmptyBatch("novelty needs both sets");
  std::set<std::string> train;
  for (const chem::MolGraph& g : training) train.insert(chem::write_smiles(g));
  int novel = 0;
  for (const chem::MolGraph& g : generated)
    if (!train.contains(chem::write_smiles(g))) ++novel;
  return static_cast<double>(novel) / static_cast<double>(generated.size());
}

double int_div(std::span<const chem::MolGraph> batch) {
  if (batch.size() < 2) throw BatchTooSmall("int_div needs >= 2 molecules");
  std::vector<Fingerprint> fps;
  fps.reserve(batch.size());
  for (const chem::MolGraph& g : batch) fps.push_back(fingerprint(g));
  double acc = 0.0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    for (std::size_t j = i + 1; j < fps.size(); ++j) {
      acc += tanimoto(fps[i], fps[j]);
      ++pairs;
    }
  }
  return 1.0 - acc / static_cast<double>(pairs);
}

chem::MolGraph murcko_scaffold(const chem::MolGraph& g) {
  const int n = g.atom_count();
  std::vector<char> keep(static_cast<std::size_t>(n), 1);
  // Prune terminal atoms until fixpoint; rings and linkers survive.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!keep[static_cast<std::size_t>(i)]) continue;
      int deg = 0;
      for (const auto& [j, o] : g.neighbors(i))
        deg += keep[static_cast<std::size_t>(j)] ? 1 : 0;
      if (deg <= 1) {
        keep[static_cast<std::size_t>(i)] = 0;
        changed = true;
      }
    }
  }
  chem::MolGraph s;
  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i)
    if (keep[static_cast<std::size_t>(i)]) remap[static_cast<std::size_t>(i)] = s.add_atom(g.atom(i));
  for (const auto& b : g.bonds()) {
    const int a = remap[static_cast<std::size_t>(b.i)], c = remap[static_cast<std::size_t>(b.j)];
    if (a >= 0 && c >= 0) s.add_bond(a, c, b.order);
  }
  return s;
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw EmptySample("wasserstein_1d on empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const std::int64_t n = static_cast<std::int64_t>(sa.size());
  const std::int64_t m = static_cast<std::int64_t>(sb.size());
  // Exact quantile-function integral on the common grid of n*m segments.
  double acc = 0.0;
  std::int64_t ia = 0, ib = 0, pos = 0;
  while (ia < n && ib < m) {
    const std::int64_t next_a = (ia + 1) * m;
    const std::int64_t next_b = (ib + 1) * n;
    const std::int64_t next = std::min(next_a, next_b);
    acc += static_cast<double>(next - pos) *
           std::fabs(sa[static_cast<std::size_t>(ia)] - sb[static_cast<std::size_t>(ib)]);
    pos = next;
    if (next == next_a) ++ia;
    if (next == next_b) ++ib;
  }
  return acc / static_cast<double>(n * m);
}

double max_tanimoto_to(const Fingerprint& fp, std::span<const Fingerprint> refs) {
  double best = 0.0;
  for (const Fingerprint& r : refs) best = std::max(best, tanimoto(fp, r));
  return best;
}

std::vector<chem::MolGraph> similarity_filter(std::span<const chem::MolGraph> generated,
                                              std::span<const chem::MolGraph> references,
                                              double threshold) {
  std::vector<Fingerprint> refs;
  refs.reserve(references.size());
  for (const chem::MolGraph& r : references) refs.push_back(fingerprint(r));
  std::vector<chem::MolGraph> kept;
  for (const chem::MolGraph& g : generated) {
    if (max_tanimoto_to(fingerprint(g), refs) > threshold) continue;
    kept.push_back(g);
  }
  return kept;
}

std::string MetricReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "metric,value\n";
  os << "validity," << validity << "\n";
  os << "uniqueness," << uniqueness << "\n";
  os << "novelty," << novelty << "\n";
  os << "int_div," << int_div << "\n";
  os << "filter_pass_rate," << filter_pass_rate << "\n";
  for (const auto& [k, v] : wasserstein) os << "wasserstein_" << k << "," << v << "\n";
  return os.str();
}

MetricReport report(std::span<const chem::MolGraph> generated,
                    std::span<const chem::MolGraph> training,
                    std::span<const chem::MolGraph> inhibitors,
                    const ContribTables& tables) {
  if (generated.empty() || training.empty() || inhibitors.empty())
    throw EmptyBatch("report needs generated, training and inhibitor sets");

  MetricReport r;
  std::vector<chem::MolGraph> valid;
  for (const chem::MolGraph& g : generated)
    if (chem::check_validity(g)) valid.push_back(g);
  r.validity = static_cast<double>(valid.size()) / static_cast<double>(generated.size());
  r.uniqueness = uniqueness(generated);
  r.novelty = novelty(generated, training);
  r.int_div = valid.size() >= 2 ? int_div(valid) : 0.0;

  int pass = 0;
  std::map<std::string, std::vector<double>> gen_desc, inh_desc;
  auto push_desc = [&](std::map<std::string, std::vector<double>>& into, const DescriptorSet& d) {
    into["mol_weight"].push_back(d.mol_weight);
    into["hbd"].push_back(d.hbd);
    into["hba"].push_back(d.hba);
    into["rotatable_bonds"].push_back(d.rotatable_bonds);
    into["logp"].push_back(d.logp_approx);
    into["tpsa"].push_back(d.tpsa_approx);
  };
  for (const chem::MolGraph& g : valid) {
    const DescriptorSet d = descriptors(g, tables);
    if (lipinski_veber_pass(d)) ++pass;
    push_desc(gen_desc, d);
  }
  r.filter_pass_rate =
      valid.empty() ? 0.0 : static_cast<double>(pass) / static_cast<double>(valid.size());
  for (const chem::MolGraph& g : inhibitors) push_desc(inh_desc, descriptors(g, tables));

  if (!valid.empty()) {
    for (const auto& [name, vals] : gen_desc)
      r.wasserstein[name] = wasserstein_1d(vals, inh_desc[name]);
  }
  return r;
}

}  // namespace targen::metrics
