#pragma once

// Binary-coded genetic algorithm over a box: linear rank fitness, stochastic
// universal sampling, single-point crossover, bit-flip mutation, and
// reinsertion of offspring over the worst individuals.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "fuzzyreq/space.hpp"

namespace fuzzyreq {

struct GASettings {
  unsigned chrom_length = 20;  // bits per decision variable
  std::size_t population_size = 100;
  std::size_t max_generations = 100;
  double generation_gap = 0.9;
  double crossover_rate = 0.9;
  double mutation_rate = 0.05;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// Minimized. Non-finite values are treated as +infinity.
using Objective = std::function<double(std::span<const double>)>;

struct GAResult {
  std::vector<double> argmin;
  double value = 0.0;
  /// Best-so-far objective after initialization and after each generation.
  std::vector<double> best_history;
};

GAResult minimize(const SpaceBox& box, const Objective& objective, const GASettings& settings);

/// Each dimension's chrom_length bits (MSB first) as an unsigned u, mapped to
/// lo + (hi - lo) * u / (2^chrom_length - 1).
std::vector<double> decode(std::span<const std::uint8_t> bits, const SpaceBox& box, unsigned chrom_length);

/// Linear ranking for minimization with selective pressure in [1, 2]: the best
/// individual gets `pressure`, the worst 2 - pressure.
std::vector<double> rank_fitness(std::span<const double> objective_values, double pressure = 2.0);

/// Indices of `count` individuals chosen by stochastic universal sampling
/// (equally spaced pointers over the cumulative fitness), in pointer order.
std::vector<std::size_t> sus_select(std::span<const double> fitness, std::size_t count, std::mt19937_64& rng);

}  // namespace fuzzyreq
