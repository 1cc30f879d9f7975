#include "fuzzyreq/genetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fuzzyreq {

void GASettings::validate() const {
  auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (chrom_length < 1 || chrom_length > 52) throw std::invalid_argument("GA: chrom_length must be in [1, 52]");
  if (population_size < 2 || population_size % 2 != 0) throw std::invalid_argument("GA: population size must be even");
  if (!rate(generation_gap) || !rate(crossover_rate) || !rate(mutation_rate)) {
    throw std::invalid_argument("GA: rates must lie in [0, 1]");
  }
}

std::vector<double> decode(std::span<const std::uint8_t> bits, const SpaceBox& box, unsigned chrom_length) {
  if (bits.size() != box.size() * chrom_length) throw std::invalid_argument("decode: bit count mismatch");
  const double denom = std::ldexp(1.0, static_cast<int>(chrom_length)) - 1.0;
  std::vector<double> x(box.size());
  for (std::size_t d = 0; d < box.size(); ++d) {
    std::uint64_t u = 0;
    for (unsigned b = 0; b < chrom_length; ++b) u = (u << 1) | (bits[d * chrom_length + b] & 1u);
    const auto& iv = box[d];
    x[d] = iv.clamp(iv.lo + iv.width() * (static_cast<double>(u) / denom));
  }
  return x;
}

std::vector<double> rank_fitness(std::span<const double> objective_values, double pressure) {
  const std::size_t n = objective_values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Worst first; stable so equal objectives keep index order.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return objective_values[a] > objective_values[b]; });
  std::vector<double> fit(n, 1.0);
  if (n < 2) return fit;
  for (std::size_t pos = 0; pos < n; ++pos) {
    fit[order[pos]] = 2.0 - pressure + 2.0 * (pressure - 1.0) * static_cast<double>(pos) / static_cast<double>(n - 1);
  }
  return fit;
}

std::vector<std::size_t> sus_select(std::span<const double> fitness, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> picks;
  if (count == 0 || fitness.empty()) return picks;
  const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("sus_select: total fitness must be positive");
  const double step = total / static_cast<double>(count);
  std::uniform_real_distribution<double> start(0.0, step);
  double pointer = start(rng);
  double cumulative = 0.0;
  std::size_t i = 0;
  picks.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    while (i + 1 < fitness.size() && cumulative + fitness[i] <= pointer) {
      cumulative += fitness[i];
      ++i;
    }
    picks.push_back(i);
    pointer += step;
  }
  return picks;
}

namespace {

using Chromosome = std::vector<std::uint8_t>;

double safe_eval(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

GAResult minimize(const SpaceBox& box, const Objective& objective, const GASettings& settings) {
  settings.validate();
  if (box.empty()) throw std::invalid_argument("minimize: empty box");

  const std::size_t n = settings.population_size;
  const std::size_t nbits = box.size() * settings.chrom_length;
  std::mt19937_64 rng(settings.seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution do_cross(settings.crossover_rate);
  std::bernoulli_distribution do_mutate(settings.mutation_rate);
  std::uniform_int_distribution<std::size_t> any_bit(0, nbits - 1);
  std::uniform_int_distribution<std::size_t> cut_point(1, nbits > 1 ? nbits - 1 : 1);

  std::vector<Chromosome> pop(n, Chromosome(nbits));
  std::vector<double> values(n);
  for (auto& c : pop) {
    for (auto& b : c) b = coin(rng) ? 1 : 0;
  }

  GAResult result;
  result.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const Chromosome& c, double v) {
    if (v < result.value || result.argmin.empty()) {
      result.value = v;
      result.argmin = decode(c, box, settings.chrom_length);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    values[i] = safe_eval(objective, decode(pop[i], box, settings.chrom_length));
    consider(pop[i], values[i]);
  }
  result.best_history.push_back(result.value);

  // At least one elite survives every generation.
  const auto n_offspring =
      std::min(n - 1, static_cast<std::size_t>(std::lround(settings.generation_gap * static_cast<double>(n))));

  for (std::size_t gen = 0; gen < settings.max_generations; ++gen) {
    if (n_offspring == 0) {
      result.best_history.push_back(result.value);
      continue;
    }
    const auto fitness = rank_fitness(values);
    auto parents = sus_select(fitness, n_offspring, rng);
    std::shuffle(parents.begin(), parents.end(), rng);

    std::vector<Chromosome> offspring;
    offspring.reserve(n_offspring);
    for (std::size_t k = 0; k < parents.size(); k += 2) {
      Chromosome a = pop[parents[k]];
      if (k + 1 == parents.size()) {
        offspring.push_back(std::move(a));
        break;
      }
      Chromosome b = pop[parents[k + 1]];
      if (nbits > 1 && do_cross(rng)) {
        const std::size_t cut = cut_point(rng);
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(),
                         b.begin() + static_cast<std::ptrdiff_t>(cut));
      }
      offspring.push_back(std::move(a));
      offspring.push_back(std::move(b));
    }
    for (auto& c : offspring) {
      if (do_mutate(rng)) c[any_bit(rng)] ^= 1u;
    }

    std::vector<double> off_values(offspring.size());
    for (std::size_t k = 0; k < offspring.size(); ++k) {
      off_values[k] = safe_eval(objective, decode(offspring[k], box, settings.chrom_length));
      consider(offspring[k], off_values[k]);
    }

    // Offspring replace the worst individuals, so the best n - n_offspring
    // (at least the elite) survive.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    for (std::size_t k = 0; k < offspring.size(); ++k) {
      pop[order[k]] = std::move(offspring[k]);
      values[order[k]] = off_values[k];
    }
    result.best_history.push_back(result.value);
  }
  return result;
}

}  // namespace fuzzyreq
