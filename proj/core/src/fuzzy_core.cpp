#include "fuzzyreq/fuzzy_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace fuzzyreq {

MembershipFunction::MembershipFunction(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw std::invalid_argument("membership function needs at least 2 vertices");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    if (!std::isfinite(v.x) || !(v.mu >= 0.0 && v.mu <= 1.0)) {
      throw std::invalid_argument("membership function vertex out of range");
    }
    if (i > 0 && !(vertices_[i - 1].x < v.x)) {
      throw std::invalid_argument("membership function x coordinates must be strictly increasing");
    }
  }
}

MembershipFunction MembershipFunction::triangle(double a, double b, double c) {
  if (a == b) return MembershipFunction({{a, 1.0}, {c, 0.0}});
  if (b == c) return MembershipFunction({{a, 0.0}, {c, 1.0}});
  return MembershipFunction({{a, 0.0}, {b, 1.0}, {c, 0.0}});
}

double MembershipFunction::operator()(double x) const {
  if (x <= vertices_.front().x) return vertices_.front().mu;
  if (x >= vertices_.back().x) return vertices_.back().mu;
  auto hi = std::upper_bound(vertices_.begin(), vertices_.end(), x,
                             [](double value, const Vertex& v) { return value < v.x; });
  const Vertex& r = *hi;
  const Vertex& l = *(hi - 1);
  // Two-sided weighting keeps values at simple fractions exact (e.g. 0.2, not 1 - 0.8).
  return ((r.x - x) * l.mu + (x - l.x) * r.mu) / (r.x - l.x);
}

double evaluate_mf(const MembershipFunction& mf, double x) { return mf(x); }

LinguisticVariable::LinguisticVariable(std::string name, Interval domain, std::vector<Term> terms)
    : name_(std::move(name)), domain_(domain), terms_(std::move(terms)) {
  if (!(domain_.lo < domain_.hi)) throw std::invalid_argument("variable '" + name_ + "': empty domain");
  if (terms_.empty()) throw std::invalid_argument("variable '" + name_ + "': no terms");
  std::unordered_set<std::string> seen;
  for (const auto& t : terms_) {
    if (!seen.insert(t.label).second) {
      throw std::invalid_argument("variable '" + name_ + "': duplicate term '" + t.label + "'");
    }
    for (const auto& v : t.mf.vertices()) {
      if (v.x < domain_.lo || v.x > domain_.hi) {
        throw std::invalid_argument("variable '" + name_ + "': term '" + t.label + "' vertex outside domain");
      }
    }
  }
  grid_.resize(terms_.size() * kDefuzzGridPoints);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    for (std::size_t j = 0; j < kDefuzzGridPoints; ++j) {
      grid_[t * kDefuzzGridPoints + j] = terms_[t].mf(grid_x(j));
    }
  }
}

double LinguisticVariable::grid_x(std::size_t j) const {
  return domain_.lo + domain_.width() * static_cast<double>(j) / static_cast<double>(kDefuzzGridPoints - 1);
}

std::optional<std::size_t> LinguisticVariable::term_index(std::string_view label) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].label == label) return i;
  }
  return std::nullopt;
}

FuzzyVector fuzzify(const LinguisticVariable& lv, double x) {
  FuzzyVector fv;
  const double c = lv.domain().clamp(x);
  fv.clamped = c != x;
  fv.degrees.reserve(lv.term_count());
  for (const auto& t : lv.terms()) fv.degrees.push_back(t.mf(c));
  return fv;
}

Defuzzified defuzzify_centroid(const LinguisticVariable& lv, std::span<const double> clipped) {
  if (clipped.size() != lv.term_count()) throw std::invalid_argument("defuzzify: clip vector size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < kDefuzzGridPoints; ++j) {
    double agg = 0.0;
    for (std::size_t t = 0; t < clipped.size(); ++t) {
      agg = std::max(agg, std::min(clipped[t], lv.grid_degree(t, j)));
    }
    num += lv.grid_x(j) * agg;
    den += agg;
  }
  if (den <= 0.0) return {lv.domain().mid(), true};
  return {lv.domain().clamp(num / den), false};
}

bool InferenceResult::any_defaulted() const {
  return std::find(defaulted.begin(), defaulted.end(), true) != defaulted.end();
}

void validate_rules(std::span<const MamdaniRule> rules, std::span<const LinguisticVariable> input_lvs,
                    std::span<const LinguisticVariable> output_lvs) {
  auto check = [](const Clause& c, std::span<const LinguisticVariable> lvs) {
    if (c.variable >= lvs.size() || c.term >= lvs[c.variable].term_count()) {
      throw std::invalid_argument("rule references a missing variable or term");
    }
  };
  for (const auto& r : rules) {
    for (const auto& c : r.antecedent) check(c, input_lvs);
    for (const auto& c : r.consequent) check(c, output_lvs);
  }
}

InferenceResult mamdani_infer(std::span<const MamdaniRule> rules, std::span<const double> inputs,
                              std::span<const LinguisticVariable> input_lvs,
                              std::span<const LinguisticVariable> output_lvs) {
  if (rules.empty()) throw std::invalid_argument("mamdani_infer: empty rule set");
  if (inputs.size() != input_lvs.size()) throw std::invalid_argument("mamdani_infer: input size mismatch");

  InferenceResult result;
  std::vector<FuzzyVector> fuzzy;
  fuzzy.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    fuzzy.push_back(fuzzify(input_lvs[i], inputs[i]));
    result.input_clamped |= fuzzy.back().clamped;
  }

  std::vector<std::vector<double>> clip(output_lvs.size());
  for (std::size_t o = 0; o < output_lvs.size(); ++o) clip[o].assign(output_lvs[o].term_count(), 0.0);

  for (const auto& rule : rules) {
    double strength = 1.0;
    for (const auto& c : rule.antecedent) {
      if (c.variable >= fuzzy.size() || c.term >= fuzzy[c.variable].degrees.size()) {
        throw std::invalid_argument("mamdani_infer: antecedent index out of range");
      }
      strength = std::min(strength, fuzzy[c.variable].degrees[c.term]);
    }
    for (const auto& c : rule.consequent) {
      if (c.variable >= clip.size() || c.term >= clip[c.variable].size()) {
        throw std::invalid_argument("mamdani_infer: consequent index out of range");
      }
      clip[c.variable][c.term] = std::max(clip[c.variable][c.term], strength);
    }
  }

  result.outputs.reserve(output_lvs.size());
  result.defaulted.reserve(output_lvs.size());
  for (std::size_t o = 0; o < output_lvs.size(); ++o) {
    const auto d = defuzzify_centroid(output_lvs[o], clip[o]);
    result.outputs.push_back(d.value);
    result.defaulted.push_back(d.no_rule_fired);
  }
  return result;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

std::vector<double> ts_infer(std::span<const TSRule> rules, std::span<const double> memberships,
                             std::span<const double> inputs) {
  if (rules.empty()) throw std::invalid_argument("ts_infer: empty rule set");
  if (memberships.size() != rules.size()) throw std::invalid_argument("ts_infer: membership count mismatch");
  const std::size_t outputs = rules.front().coefficients.size();
  for (const auto& r : rules) {
    if (r.coefficients.size() != outputs) throw std::invalid_argument("ts_infer: output count mismatch");
    for (const auto& row : r.coefficients) {
      if (row.size() != inputs.size() + 1) throw std::invalid_argument("ts_infer: coefficient dimension mismatch");
    }
  }

  auto affine = [&](const TSRule& r, std::size_t j) {
    const auto& a = r.coefficients[j];
    double y = a[0];
    for (std::size_t i = 0; i < inputs.size(); ++i) y += a[i + 1] * inputs[i];
    return y;
  };

  double total = 0.0;
  for (double m : memberships) total += m;

  std::vector<double> out(outputs, 0.0);
  if (!(total > 0.0)) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rules.size(); ++r) {
      if (rules[r].center.size() != inputs.size()) continue;
      const double d = squared_distance(rules[r].center, inputs);
      if (d < best_d) {
        best_d = d;
        best = r;
      }
    }
    for (std::size_t j = 0; j < outputs; ++j) out[j] = affine(rules[best], j);
    return out;
  }

  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (memberships[r] == 0.0) continue;
    for (std::size_t j = 0; j < outputs; ++j) out[j] += memberships[r] * affine(rules[r], j);
  }
  for (double& y : out) y /= total;
  return out;
}

void fcm_memberships(std::span<const double> squared_distances, double fuzzifier, std::span<double> out) {
  const auto zeros = std::count(squared_distances.begin(), squared_distances.end(), 0.0);
  if (zeros > 0) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = squared_distances[k] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
    }
    return;
  }
  // |x - c|^(-2/(m-1)) == (|x - c|^2)^(-1/(m-1))
  const double p = -1.0 / (fuzzifier - 1.0);
  double total = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = p == -1.0 ? 1.0 / squared_distances[k] : std::pow(squared_distances[k], p);
    total += out[k];
  }
  for (auto& u : out) u /= total;
}

std::vector<double> ts_memberships(const TSRuleBase& base, std::span<const double> inputs) {
  const auto& rules = base.rules;
  std::vector<double> mu(rules.size(), 0.0);
  if (rules.empty()) return mu;
  std::vector<double> d2(rules.size());
  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (rules[r].center.size() != inputs.size()) throw std::invalid_argument("ts_memberships: center dimension mismatch");
    d2[r] = squared_distance(rules[r].center, inputs);
  }

  if (base.antecedent == TSAntecedent::gaussian) {
    const double s2 = 2.0 * base.spread * base.spread;
    for (std::size_t r = 0; r < rules.size(); ++r) mu[r] = std::exp(-d2[r] / s2);
    return mu;
  }

  fcm_memberships(d2, base.fuzzifier, mu);
  return mu;
}

std::vector<double> ts_infer(const TSRuleBase& base, std::span<const double> inputs) {
  const auto mu = ts_memberships(base, inputs);
  return ts_infer(base.rules, mu, inputs);
}

}  // namespace fuzzyreq
