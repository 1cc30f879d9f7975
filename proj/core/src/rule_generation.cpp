#include "fuzzyreq/rule_generation.hpp"

#include <algorithm>
#include <stdexcept>

namespace fuzzyreq {

std::vector<int> numeric_map(std::span<const std::string> labels, std::span<const LinguisticVariable> lvs) {
  if (labels.size() != lvs.size()) throw std::invalid_argument("numeric_map: label count mismatch");
  std::vector<int> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto idx = lvs[i].term_index(labels[i]);
    if (!idx) throw std::invalid_argument("numeric_map: '" + labels[i] + "' is not a term of '" + lvs[i].name() + "'");
    out.push_back(static_cast<int>(*idx) + 1);
  }
  return out;
}

BoundaryMatrix boundary_matrix(const Matrix& weights, std::span<const std::size_t> term_counts) {
  if (weights.empty() || weights.front().empty()) throw std::invalid_argument("boundary_matrix: empty weight matrix");
  if (weights.size() != term_counts.size()) throw std::invalid_argument("boundary_matrix: row count mismatch");
  const std::size_t cols = weights.front().size();
  BoundaryMatrix bm;
  bm.columns.assign(cols, {});
  for (std::size_t r = 0; r < weights.size(); ++r) {
    if (weights[r].size() != cols) throw std::invalid_argument("boundary_matrix: ragged weight matrix");
    if (term_counts[r] < 2) throw std::invalid_argument("boundary_matrix: fewer than 2 terms");
    const double top = static_cast<double>(term_counts[r]);
    for (std::size_t c = 0; c < cols; ++c) {
      const double w = weights[r][c];
      bm.columns[c].lo += std::min(w, w * top);
      bm.columns[c].hi += std::max(w, w * top);
    }
  }
  return bm;
}

std::vector<double> score(std::span<const int> ordinals, const Matrix& weights) {
  if (ordinals.size() != weights.size()) throw std::invalid_argument("score: ordinal count mismatch");
  const std::size_t cols = weights.empty() ? 0 : weights.front().size();
  std::vector<double> s(cols, 0.0);
  for (std::size_t r = 0; r < weights.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) s[c] += ordinals[r] * weights[r][c];
  }
  return s;
}

std::size_t assign_consequent(double score, ColumnBounds bounds, std::size_t k) {
  if (k == 0) throw std::invalid_argument("assign_consequent: no target terms");
  const double range = bounds.hi - bounds.lo;
  if (!(range > 0.0)) return (k + 1) / 2 - 1;
  // Smallest j with score <= lo + j*range/k, compared as (score-lo)*k <= j*range
  // so integer-valued scores land exactly on interior boundaries.
  const double lhs = (score - bounds.lo) * static_cast<double>(k);
  for (std::size_t j = 1; j < k; ++j) {
    if (lhs <= static_cast<double>(j) * range) return j - 1;
  }
  return k - 1;
}

std::vector<MamdaniRule> generate_ruleset(const Matrix& weights, std::span<const LinguisticVariable> sources,
                                          std::span<const LinguisticVariable> targets) {
  if (sources.empty() || targets.empty()) throw std::invalid_argument("generate_ruleset: empty relation");
  std::vector<std::size_t> counts;
  for (const auto& s : sources) counts.push_back(s.term_count());
  const auto bm = boundary_matrix(weights, counts);
  if (bm.columns.size() != targets.size()) throw std::invalid_argument("generate_ruleset: column count mismatch");

  std::vector<MamdaniRule> rules;
  std::vector<int> ord(sources.size(), 1);
  while (true) {
    const auto s = score(ord, weights);
    MamdaniRule rule;
    for (std::size_t i = 0; i < sources.size(); ++i) rule.antecedent.push_back({i, static_cast<std::size_t>(ord[i] - 1)});
    for (std::size_t c = 0; c < targets.size(); ++c) {
      rule.consequent.push_back({c, assign_consequent(s[c], bm.columns[c], targets[c].term_count())});
    }
    rules.push_back(std::move(rule));

    // Odometer increment, last source fastest.
    std::size_t i = sources.size();
    while (i > 0) {
      --i;
      if (static_cast<std::size_t>(ord[i]) < counts[i]) {
        ++ord[i];
        break;
      }
      ord[i] = 1;
      if (i == 0) return rules;
    }
  }
}

std::vector<MamdaniRule> generate_ruleset(const WeightedRelation& relation, const Model& model) {
  const auto src = model.variables(relation.sources);
  const auto dst = model.variables(relation.targets);
  return generate_ruleset(relation.weights, src, dst);
}

}  // namespace fuzzyreq
