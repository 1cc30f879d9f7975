#pragma once

// Membership functions, linguistic variables and the two inference processes:
// Mamdani (min/max/centroid) for rules with linguistic consequents, and
// Takagi-Sugeno for rules with affine consequents.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyreq/space.hpp"

namespace fuzzyreq {

inline constexpr std::size_t kDefuzzGridPoints = 201;

struct Vertex {
  double x = 0.0;
  double mu = 0.0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Piecewise-linear membership function. Evaluation interpolates between
/// vertices; outside the vertex span the boundary degree is held flat, which is
/// 0 for ordinary triangles and 1 for shoulder terms.
class MembershipFunction {
 public:
  /// Throws std::invalid_argument unless there are >= 2 vertices with strictly
  /// increasing x and every degree in [0, 1].
  explicit MembershipFunction(std::vector<Vertex> vertices);

  /// Triangle with feet a, c and peak b. a == b or b == c produce a shoulder.
  static MembershipFunction triangle(double a, double b, double c);

  double operator()(double x) const;

  std::span<const Vertex> vertices() const { return vertices_; }

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

 private:
  std::vector<Vertex> vertices_;
};

double evaluate_mf(const MembershipFunction& mf, double x);

struct Term {
  std::string label;
  MembershipFunction mf;

  friend bool operator==(const Term&, const Term&) = default;
};

struct FuzzyVector {
  std::vector<double> degrees;
  /// Set when the crisp input was outside the domain and got clamped.
  bool clamped = false;
};

/// A named real domain with ordered linguistic terms. Immutable; term degrees
/// on the defuzzification grid are tabulated at construction.
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, Interval domain, std::vector<Term> terms);

  const std::string& name() const { return name_; }
  const Interval& domain() const { return domain_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  const Term& term(std::size_t i) const { return terms_.at(i); }

  std::optional<std::size_t> term_index(std::string_view label) const;

  /// Degree of term t at defuzzification grid sample j.
  double grid_degree(std::size_t t, std::size_t j) const { return grid_[t * kDefuzzGridPoints + j]; }
  double grid_x(std::size_t j) const;

  friend bool operator==(const LinguisticVariable& a, const LinguisticVariable& b) {
    return a.name_ == b.name_ && a.domain_ == b.domain_ && a.terms_ == b.terms_;
  }

 private:
  std::string name_;
  Interval domain_;
  std::vector<Term> terms_;
  std::vector<double> grid_;
};

FuzzyVector fuzzify(const LinguisticVariable& lv, double x);

struct Defuzzified {
  double value = 0.0;
  /// All clip levels were zero; value is the domain midpoint.
  bool no_rule_fired = false;
};

/// Centroid of max-aggregated, min-clipped term surfaces on a 201-point grid.
Defuzzified defuzzify_centroid(const LinguisticVariable& lv, std::span<const double> clipped);

struct Clause {
  std::size_t variable = 0;
  std::size_t term = 0;

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Conjunctive rule: IF v_a is t_a AND ... THEN w_b is s_b AND ...
struct MamdaniRule {
  std::vector<Clause> antecedent;
  std::vector<Clause> consequent;

  friend bool operator==(const MamdaniRule&, const MamdaniRule&) = default;
};

struct InferenceResult {
  std::vector<double> outputs;
  /// Per output: true when no rule asserted any of its terms with nonzero strength.
  std::vector<bool> defaulted;
  /// Some input was outside its domain and clamped before fuzzification.
  bool input_clamped = false;

  bool any_defaulted() const;
};

/// Mamdani inference: min conjunction, min implication, max aggregation,
/// centroid defuzzification. Throws std::invalid_argument on an empty rule set
/// or mismatched sizes/indices.
InferenceResult mamdani_infer(std::span<const MamdaniRule> rules, std::span<const double> inputs,
                              std::span<const LinguisticVariable> input_lvs,
                              std::span<const LinguisticVariable> output_lvs);

/// Throws std::invalid_argument if any clause references a missing variable or term.
void validate_rules(std::span<const MamdaniRule> rules, std::span<const LinguisticVariable> input_lvs,
                    std::span<const LinguisticVariable> output_lvs);

/// T-S rule: per output j, y_j = a_j0 + sum_i a_ji * x_i. The center places the
/// rule's antecedent cluster in antecedent space.
struct TSRule {
  std::vector<double> center;
  std::vector<std::vector<double>> coefficients;

  friend bool operator==(const TSRule&, const TSRule&) = default;
};

enum class TSAntecedent {
  /// Fuzzy c-means membership, u_k(x) proportional to |x - c_k|^(-2/(m-1)).
  fcm,
  /// Gaussian, mu_k(x) = exp(-|x - c_k|^2 / (2 sigma^2)).
  gaussian,
};

struct TSRuleBase {
  std::vector<TSRule> rules;
  TSAntecedent antecedent = TSAntecedent::fcm;
  double fuzzifier = 2.0;
  double spread = 1.0;
};

/// Weighted average of the rules' affine outputs under the given antecedent
/// degrees. If the degrees sum to zero the rule whose center is nearest to the
/// inputs is used alone.
std::vector<double> ts_infer(std::span<const TSRule> rules, std::span<const double> memberships,
                             std::span<const double> inputs);

/// Fuzzy c-means memberships of one point given its squared distances to each
/// center: u_k = d_k^(-2/(m-1)) / sum_j d_j^(-2/(m-1)). A point on a center
/// belongs to it (shared equally among coincident centers).
void fcm_memberships(std::span<const double> squared_distances, double fuzzifier, std::span<double> out);

std::vector<double> ts_memberships(const TSRuleBase& base, std::span<const double> inputs);

std::vector<double> ts_infer(const TSRuleBase& base, std::span<const double> inputs);

}  // namespace fuzzyreq
