#pragma once

// Fuzzy c-means context clustering and the membership-weighted affine
// consequent trainer that identifies T-S coefficient matrices.
// Everything here works on range-normalized data.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fuzzyreq/fuzzy_core.hpp"

namespace fuzzyreq {

using Point = std::vector<double>;

struct FCMSettings {
  double fuzzifier = 2.0;
  double tolerance = 1e-6;  // max center movement
  std::size_t max_iterations = 300;
  std::uint64_t seed = 1;
};

struct FCMResult {
  std::vector<Point> centers;
  /// N x K, computed from the final centers.
  std::vector<std::vector<double>> memberships;
  double fuzzifier = 2.0;
  std::size_t iterations = 0;
  /// Objective sum_ik u_ik^m |x_i - c_k|^2 after each membership update.
  std::vector<double> objective_history;
  /// Two centers collapsed within 1e-9 and one was perturbed.
  bool collapsed = false;
};

/// Throws std::invalid_argument if k == 0 or k > points.size().
FCMResult fcm_cluster(std::span<const Point> points, std::size_t k, const FCMSettings& settings = {});

double fcm_objective(std::span<const Point> points, const FCMResult& result);

struct TrainerSettings {
  std::size_t epochs = 100;
  double goal = 0.05;  // stop once weighted MSE <= goal
  double rate = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Sample {
  Point input;
  Point target;
};

/// [cluster][output] -> (a0, a1 .. am).
using CoefficientMatrix = std::vector<std::vector<std::vector<double>>>;

struct TrainingResult {
  CoefficientMatrix coefficients;
  /// Per cluster, membership-weighted MSE before and after training.
  std::vector<double> cluster_initial_mse;
  std::vector<double> cluster_mse;
  /// Per cluster, weighted MSE after each completed epoch (first entry: before training).
  std::vector<std::vector<double>> cluster_history;
  /// Clusters without membership mass that fell back to the global fit.
  std::vector<bool> defaulted;
  /// (1/N) sum_i sum_k u_ik * mean_j (f_kj(x_i) - t_ij)^2.
  double mse = 0.0;
};

/// Fits each cluster's affine map by per-sample gradient descent weighted by
/// the cluster memberships, warm-started from a global fit. An epoch that would
/// raise the weighted MSE is rolled back and ends training for that cluster.
/// Throws std::runtime_error if training diverges.
TrainingResult train_consequents(std::span<const Sample> samples, const FCMResult& clusters,
                                 const TrainerSettings& settings = {});

TSRuleBase make_rule_base(const FCMResult& clusters, const CoefficientMatrix& coefficients);

}  // namespace fuzzyreq
