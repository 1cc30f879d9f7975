#include <benchmark/benchmark.h>

#include <random>

#include "fuzzyreq/genetic.hpp"
#include "fuzzyreq/learning.hpp"
#include "fuzzyreq/schemas.hpp"

using namespace fuzzyreq;

namespace {

const ReasoningEngine& engine() {
  static const ReasoningEngine e(load_fixture());
  return e;
}

std::vector<double> midpoint(const SpaceBox& box) {
  std::vector<double> v;
  for (const auto& d : box.dims()) v.push_back(d.mid() + 0.1 * d.width());
  return v;
}

void BM_MamdaniForward(benchmark::State& state) {
  const auto mv = midpoint(engine().context_space());
  for (auto _ : state) benchmark::DoNotOptimize(engine().forward_reason(mv));
}
BENCHMARK(BM_MamdaniForward);

void BM_SatisfactionDeviation(benchmark::State& state) {
  const auto sd = engine().desired_satisfaction(midpoint(engine().context_space()));
  const auto cp = midpoint(engine().config_space());
  for (auto _ : state) benchmark::DoNotOptimize(engine().config_deviation(sd, cp));
}
BENCHMARK(BM_SatisfactionDeviation);

TSRuleBase random_ts(std::size_t k) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TSRuleBase base;
  for (std::size_t c = 0; c < k; ++c) {
    TSRule r;
    r.center = {u(rng), u(rng), u(rng), u(rng)};
    r.coefficients.assign(3, std::vector<double>(5));
    for (auto& row : r.coefficients) {
      for (auto& a : row) a = u(rng);
    }
    base.rules.push_back(std::move(r));
  }
  return base;
}

void BM_TsInfer(benchmark::State& state) {
  const auto base = random_ts(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> x{0.3, 0.6, 0.2, 0.8};
  for (auto _ : state) benchmark::DoNotOptimize(ts_infer(base, x));
}
BENCHMARK(BM_TsInfer)->Arg(2)->Arg(10)->Arg(50);

void BM_BackwardReason(benchmark::State& state) {
  const auto mv = midpoint(engine().context_space());
  GASettings ga;
  for (auto _ : state) benchmark::DoNotOptimize(engine().backward_reason(mv, ga));
}
BENCHMARK(BM_BackwardReason)->Unit(benchmark::kMillisecond);

void BM_GaSphere(benchmark::State& state) {
  const SpaceBox box({{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}});
  GASettings ga;
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize(
        box, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }, ga));
  }
}
BENCHMARK(BM_GaSphere)->Unit(benchmark::kMillisecond);

void BM_Fcm(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(rng), u(rng), u(rng), u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(fcm_cluster(pts, 5));
}
BENCHMARK(BM_Fcm)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
