#pragma once

// Mamdani rule-set generation from a weight matrix: every linguistic
// combination of the sources is scored through W, and each target column's
// score range is cut into equal-width intervals, one per target term.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fuzzyreq/domain_model.hpp"
#include "fuzzyreq/fuzzy_core.hpp"

namespace fuzzyreq {

/// Ordinal position (1-based) of each label in its variable's term list.
/// Throws std::invalid_argument on an unknown label.
std::vector<int> numeric_map(std::span<const std::string> labels, std::span<const LinguisticVariable> lvs);

struct ColumnBounds {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const ColumnBounds&, const ColumnBounds&) = default;
};

/// Per target column, min and max of v * W over all ordinal vectors v.
struct BoundaryMatrix {
  std::vector<ColumnBounds> columns;
};

/// Closed form: a positive weight contributes at the top ordinal for the max
/// and ordinal 1 for the min; a negative one the other way round.
BoundaryMatrix boundary_matrix(const Matrix& weights, std::span<const std::size_t> term_counts);

/// v * W for one ordinal vector.
std::vector<double> score(std::span<const int> ordinals, const Matrix& weights);

/// 0-based term index for `score` after splitting [lo, hi] into k equal
/// intervals [lo, lo+w], (lo+w, lo+2w], ..., (.., hi]. A degenerate column
/// (lo == hi) maps to the middle term ceil(k/2).
std::size_t assign_consequent(double score, ColumnBounds bounds, std::size_t k);

/// One rule per source combination, emitted in lexicographic order of the
/// source ordinals (last source varies fastest).
std::vector<MamdaniRule> generate_ruleset(const Matrix& weights, std::span<const LinguisticVariable> sources,
                                          std::span<const LinguisticVariable> targets);

std::vector<MamdaniRule> generate_ruleset(const WeightedRelation& relation, const Model& model);

}  // namespace fuzzyreq
