#include "fuzzyreq/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fuzzyreq {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

void update_memberships(std::span<const Point> points, std::span<const Point> centers, double m,
                        std::vector<std::vector<double>>& u) {
  std::vector<double> d2(centers.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < centers.size(); ++k) d2[k] = sq_dist(points[i], centers[k]);
    u[i].resize(centers.size());
    fcm_memberships(d2, m, u[i]);
  }
}

double objective(std::span<const Point> points, std::span<const Point> centers,
                 const std::vector<std::vector<double>>& u, double m) {
  double j = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < centers.size(); ++k) j += std::pow(u[i][k], m) * sq_dist(points[i], centers[k]);
  }
  return j;
}

}  // namespace

FCMResult fcm_cluster(std::span<const Point> points, std::size_t k, const FCMSettings& settings) {
  if (k == 0) throw std::invalid_argument("fcm_cluster: k must be >= 1");
  if (k > points.size()) throw std::invalid_argument("fcm_cluster: more clusters than points");
  if (!(settings.fuzzifier > 1.0)) throw std::invalid_argument("fcm_cluster: fuzzifier must exceed 1");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("fcm_cluster: ragged points");
  }

  std::mt19937_64 rng(settings.seed);
  FCMResult r;
  r.fuzzifier = settings.fuzzifier;

  // Seeded sample of distinct points; duplicates fill in if there are not enough.
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t i : idx) {
    if (r.centers.size() == k) break;
    const bool dup = std::any_of(r.centers.begin(), r.centers.end(),
                                 [&](const Point& c) { return c == points[i]; });
    if (!dup) r.centers.push_back(points[i]);
  }
  for (std::size_t i = 0; r.centers.size() < k; ++i) r.centers.push_back(points[idx[i]]);

  const double m = settings.fuzzifier;
  std::vector<std::vector<double>> u(points.size());
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);

  for (std::size_t it = 0; it < settings.max_iterations; ++it) {
    update_memberships(points, r.centers, m, u);
    r.objective_history.push_back(objective(points, r.centers, u, m));

    double moved = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      Point next(dim, 0.0);
      double w_total = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double w = std::pow(u[i][c], m);
        w_total += w;
        for (std::size_t d = 0; d < dim; ++d) next[d] += w * points[i][d];
      }
      if (w_total > 0.0) {
        for (auto& v : next) v /= w_total;
      } else {
        next = r.centers[c];
      }
      moved = std::max(moved, std::sqrt(sq_dist(next, r.centers[c])));
      r.centers[c] = std::move(next);
    }
    r.iterations = it + 1;

    bool perturbed = false;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (sq_dist(r.centers[a], r.centers[b]) < 1e-18) {
          for (auto& v : r.centers[b]) v += jitter(rng);
          perturbed = true;
        }
      }
    }
    r.collapsed |= perturbed;
    if (!perturbed && moved < settings.tolerance) break;
  }

  update_memberships(points, r.centers, m, u);
  r.memberships = std::move(u);
  return r;
}

double fcm_objective(std::span<const Point> points, const FCMResult& result) {
  return objective(points, result.centers, result.memberships, result.fuzzifier);
}

void TrainerSettings::validate() const {
  if (epochs < 1) throw std::invalid_argument("trainer: epochs must be >= 1");
  if (!(rate > 0.0)) throw std::invalid_argument("trainer: rate must be positive");
}

namespace {

using Params = std::vector<std::vector<double>>;  // [output][m+1]

double predict(const std::vector<double>& a, const Point& x) {
  double y = a[0];
  for (std::size_t i = 0; i < x.size(); ++i) y += a[i + 1] * x[i];
  return y;
}

double weighted_mse(std::span<const Sample> samples, std::span<const double> w, const Params& p) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (w[i] == 0.0) continue;
    double e = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double r = predict(p[j], samples[i].input) - samples[i].target[j];
      e += r * r;
    }
    num += w[i] * e / static_cast<double>(p.size());
    den += w[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

constexpr int kMaxHalvings = 30;

struct FitOutcome {
  Params params;
  std::vector<double> history;
};

FitOutcome fit_affine(std::span<const Sample> samples, std::span<const double> w, Params init,
                      const TrainerSettings& s, std::mt19937_64& rng) {
  FitOutcome out{std::move(init), {}};
  const double start = weighted_mse(samples, w, out.params);
  out.history.push_back(start);
  if (start <= s.goal) return out;

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  double rate = s.rate;
  int halvings = 0;
  for (std::size_t epoch = 0; epoch < s.epochs; ++epoch) {
    Params prev = out.params;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      if (w[i] == 0.0) continue;
      const auto& x = samples[i].input;
      for (std::size_t j = 0; j < out.params.size(); ++j) {
        auto& a = out.params[j];
        const double g = rate * w[i] * (predict(a, x) - samples[i].target[j]);
        a[0] -= g;
        for (std::size_t d = 0; d < x.size(); ++d) a[d + 1] -= g * x[d];
      }
    }
    const double mse = weighted_mse(samples, w, out.params);
    if (!std::isfinite(mse) || mse > 1e6 * (start + 1.0)) {
      throw std::runtime_error("train_consequents: gradient descent diverged");
    }
    // An epoch that makes things worse is undone and retried with half the step.
    if (mse > out.history.back()) {
      out.params = std::move(prev);
      if (++halvings > kMaxHalvings) break;
      rate *= 0.5;
      continue;
    }
    out.history.push_back(mse);
    if (mse <= s.goal) break;
  }
  return out;
}

}  // namespace

TrainingResult train_consequents(std::span<const Sample> samples, const FCMResult& clusters,
                                 const TrainerSettings& settings) {
  settings.validate();
  if (samples.empty()) throw std::invalid_argument("train_consequents: no samples");
  if (clusters.memberships.size() != samples.size()) {
    throw std::invalid_argument("train_consequents: membership rows != sample count");
  }
  const std::size_t in_dim = samples.front().input.size();
  const std::size_t out_dim = samples.front().target.size();
  for (const auto& s : samples) {
    if (s.input.size() != in_dim || s.target.size() != out_dim) throw std::invalid_argument("train_consequents: ragged samples");
  }
  const std::size_t k = clusters.centers.size();

  std::mt19937_64 rng(settings.seed);
  const std::vector<double> ones(samples.size(), 1.0);
  const Params zero(out_dim, std::vector<double>(in_dim + 1, 0.0));
  const auto global = fit_affine(samples, ones, zero, settings, rng);

  TrainingResult r;
  r.coefficients.resize(k);
  r.cluster_initial_mse.resize(k);
  r.cluster_mse.resize(k);
  r.cluster_history.resize(k);
  r.defaulted.assign(k, false);

  std::vector<double> w(samples.size());
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double mass = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      w[i] = clusters.memberships[i].at(c);
      mass += w[i];
    }
    if (!(mass > 1e-12)) {
      r.coefficients[c] = global.params;
      r.defaulted[c] = true;
      r.cluster_initial_mse[c] = r.cluster_mse[c] = weighted_mse(samples, w, global.params);
      r.cluster_history[c] = {r.cluster_mse[c]};
      total += mass * r.cluster_mse[c];
      continue;
    }
    auto fit = fit_affine(samples, w, global.params, settings, rng);
    r.cluster_initial_mse[c] = fit.history.front();
    r.cluster_mse[c] = fit.history.back();
    r.cluster_history[c] = std::move(fit.history);
    r.coefficients[c] = std::move(fit.params);
    total += mass * r.cluster_mse[c];
  }
  r.mse = total / static_cast<double>(samples.size());
  return r;
}

TSRuleBase make_rule_base(const FCMResult& clusters, const CoefficientMatrix& coefficients) {
  if (clusters.centers.size() != coefficients.size()) throw std::invalid_argument("make_rule_base: cluster count mismatch");
  TSRuleBase base;
  base.antecedent = TSAntecedent::fcm;
  base.fuzzifier = clusters.fuzzifier;
  for (std::size_t c = 0; c < coefficients.size(); ++c) base.rules.push_back({clusters.centers[c], coefficients[c]});
  return base;
}

}  // namespace fuzzyreq
