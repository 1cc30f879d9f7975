#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fuzzyreq/domain_model.hpp"
#include "fuzzyreq/knowledge_base.hpp"
#include "fuzzyreq/schemas.hpp"
#include "oracles.hpp"

using namespace fuzzyreq;

namespace {

const ReasoningEngine& engine() {
  static const ReasoningEngine e(load_fixture());
  return e;
}

GASettings small_ga(std::uint64_t seed) {
  GASettings g;
  g.population_size = 40;
  g.max_generations = 30;
  g.seed = seed;
  return g;
}

GASettings seeded(std::uint64_t seed) {
  GASettings g;
  g.seed = seed;
  return g;
}

using Verts = std::vector<std::pair<double, double>>;

Verts verts_of(const MembershipFunction& mf) {
  Verts v;
  for (const auto& p : mf.vertices()) v.emplace_back(p.x, p.mu);
  return v;
}

// min/max/centroid written out directly from the rule list and MF vertices.
std::vector<double> straight_mamdani(std::span<const MamdaniRule> rules, std::vector<double> x,
                                     std::span<const LinguisticVariable> in, std::span<const LinguisticVariable> out) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], in[i].domain().lo, in[i].domain().hi);
  std::vector<std::vector<double>> agg(out.size());
  for (std::size_t o = 0; o < out.size(); ++o) agg[o].assign(out[o].term_count(), 0.0);
  for (const auto& r : rules) {
    double s = 1.0;
    for (const auto& c : r.antecedent) s = std::min(s, oracle::pwl(verts_of(in[c.variable].term(c.term).mf), x[c.variable]));
    for (const auto& c : r.consequent) agg[c.variable][c.term] = std::max(agg[c.variable][c.term], s);
  }
  std::vector<double> y;
  for (std::size_t o = 0; o < out.size(); ++o) {
    const auto& lv = out[o];
    const auto mu = [&](double v) {
      double a = 0.0;
      for (std::size_t t = 0; t < lv.term_count(); ++t) a = std::max(a, std::min(agg[o][t], oracle::pwl(verts_of(lv.term(t).mf), v)));
      return a;
    };
    y.push_back(oracle::centroid(mu, lv.domain().lo, lv.domain().hi, kDefuzzGridPoints));
  }
  return y;
}

std::vector<double> random_context(std::mt19937_64& rng) {
  const auto& box = engine().context_space();
  std::vector<double> mv;
  for (const auto& d : box.dims()) mv.push_back(std::uniform_real_distribution<double>(d.lo, d.hi)(rng));
  return mv;
}

}  // namespace

TEST(WeightedDeviation, Examples) {
  const std::vector<double> w3{1, 1, 1};
  EXPECT_EQ(weighted_deviation(std::vector<double>{0.3, 0.6, 0.9}, std::vector<double>{0.3, 0.6, 0.9}, w3), 0.0);
  EXPECT_NEAR(weighted_deviation(std::vector<double>{1, 0.5, 0}, std::vector<double>{0.8, 0.5, 0.4}, w3), 0.2 / 3, 1e-15);
  EXPECT_DOUBLE_EQ(weighted_deviation(std::vector<double>{1, 0, 0}, std::vector<double>{0, 0, 0}, std::vector<double>{2, 1, 1}), 0.5);
}

TEST(WeightedDeviation, Properties) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)}, w{u(rng), u(rng), u(rng) + 0.01};
    const double d = weighted_deviation(a, b, w);
    EXPECT_GE(d, 0.0);
    EXPECT_EQ(d, weighted_deviation(b, a, w));
    std::vector<double> w7 = w;
    for (auto& x : w7) x *= 7.0;
    EXPECT_NEAR(weighted_deviation(a, b, w7), d, 1e-15);
  }
}

TEST(WeightedDeviation, Errors) {
  EXPECT_THROW(weighted_deviation(std::vector<double>{1}, std::vector<double>{1}, std::vector<double>{0}), std::invalid_argument);
  EXPECT_THROW(weighted_deviation(std::vector<double>{1}, std::vector<double>{1, 2}, std::vector<double>{1}), std::invalid_argument);
  EXPECT_THROW(weighted_deviation(std::vector<double>{1}, std::vector<double>{1}, std::vector<double>{-1}), std::invalid_argument);
}

TEST(Satisfaction, DesiredAtMidpointsIsMid) {
  const auto& e = engine();
  std::vector<double> mv;
  for (const auto& d : e.context_space().dims()) mv.push_back(d.mid());
  // Every context is fully Mid there, so only the all-Mid rule fires.
  std::size_t fired = 0;
  for (const auto& r : e.rules(RelationKind::evo)) {
    bool all_mid = true;
    for (const auto& c : r.antecedent) all_mid &= c.term == 1;
    if (all_mid) {
      ++fired;
      for (const auto& c : r.consequent) EXPECT_EQ(c.term, 1u);
    }
  }
  EXPECT_EQ(fired, 1u);
  for (double sd : e.desired_satisfaction(mv)) EXPECT_NEAR(sd, 0.5, 1e-9);
}

TEST(Satisfaction, EnergySweepFollowsEvoSign) {
  // W_EVO[energy][energy_efficiency] = -4
  const auto& e = engine();
  std::vector<double> mv;
  for (const auto& d : e.context_space().dims()) mv.push_back(d.mid());
  const auto& dom = e.context_space()[2];
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 200; ++j) {
    mv[2] = dom.lo + dom.width() * j / 200.0;
    const double sd = e.desired_satisfaction(mv)[1];
    EXPECT_LE(sd, prev + 1e-12);
    prev = sd;
  }
  mv[2] = dom.lo;
  const double at_min = e.desired_satisfaction(mv)[1];
  mv[2] = dom.hi;
  EXPECT_LT(e.desired_satisfaction(mv)[1], at_min);
}

TEST(Satisfaction, DataSizeSweepFollowsSatSign) {
  // W_SAT[data_size][information_efficiency] = 4
  const auto& e = engine();
  std::vector<double> cp;
  for (const auto& d : e.config_space().dims()) cp.push_back(d.mid());
  cp[0] = 15.0;  // fully GPS; the midpoint 0 is the split, where no locator term holds
  const auto& dom = e.config_space()[1];
  double prev = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 200; ++j) {
    cp[1] = dom.lo + dom.width() * j / 200.0;
    const auto sat = e.actual_satisfaction(cp);
    EXPECT_GE(sat.values[2], prev - 1e-12);
    prev = sat.values[2];
  }
  cp[1] = dom.lo;
  const double at_min = e.actual_satisfaction(cp).values[2];
  cp[1] = dom.hi;
  EXPECT_GT(e.actual_satisfaction(cp).values[2], at_min);
}

TEST(Satisfaction, BoundedAndDeterministic) {
  const auto& e = engine();
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const auto mv = random_context(rng);
    for (double v : e.desired_satisfaction(mv)) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    std::vector<double> cp;
    for (const auto& d : e.config_space().dims()) cp.push_back(std::uniform_real_distribution<double>(d.lo, d.hi)(rng));
    const auto a = e.actual_satisfaction(cp);
    EXPECT_EQ(a.values, e.actual_satisfaction(cp).values);
    for (double v : a.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(ForwardReason, MatchesStraightLineReimplementation) {
  const auto& e = engine();
  const std::vector<double> mv{380.0, 100.0, 60.0, 256.0};
  const auto d = e.forward_reason(mv);
  const auto cp = straight_mamdani(e.rules(RelationKind::adp), mv, e.prior().contexts, e.prior().tasks);
  ASSERT_EQ(d.cp.size(), cp.size());
  for (std::size_t i = 0; i < cp.size(); ++i) EXPECT_NEAR(d.cp[i], cp[i], 1e-9);
  const auto sd = straight_mamdani(e.rules(RelationKind::evo), mv, e.prior().contexts, e.model().variables(Role::softgoal));
  for (std::size_t i = 0; i < sd.size(); ++i) EXPECT_NEAR(d.sd_desired[i], sd[i], 1e-9);
  EXPECT_EQ(d.mode, Mode::naive);
}

TEST(ForwardReason, AllMidDataSizeRulesGiveMidpoint) {
  const auto& e = engine();
  std::vector<MamdaniRule> rules(e.rules(RelationKind::adp).begin(), e.rules(RelationKind::adp).end());
  for (auto& r : rules) r.consequent = {{1, 1}};
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto r = mamdani_infer(rules, random_context(rng), e.prior().contexts, e.prior().tasks);
    EXPECT_NEAR(r.outputs[1], 50.0, 1e-9);
  }
}

TEST(ForwardReason, DecisionsStayInSpaces) {
  const auto& e = engine();
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const auto d = e.forward_reason(random_context(rng));
    EXPECT_TRUE(e.config_space().contains(d.cp));
    EXPECT_GE(d.deviation, 0.0);
  }
}

TEST(BackwardReason, NoWorseThanForward) {
  const auto& e = engine();
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto mv = random_context(rng);
    const auto fr = e.forward_reason(mv);
    const auto br = e.backward_reason(mv, seeded(100u + t));
    EXPECT_EQ(br.mode, Mode::optimized);
    EXPECT_TRUE(e.config_space().contains(br.cp));
    EXPECT_EQ(br.sd_desired, fr.sd_desired);
    EXPECT_LE(br.deviation, fr.deviation + 1e-9);
  }
}

TEST(BackwardReason, ReachesAnAchievableTarget) {
  const auto& e = engine();
  const std::vector<double> target_cp{12.0, 70.0, 20.0};
  const auto desired = e.actual_satisfaction(target_cp).values;
  const auto r = minimize(e.config_space(), [&](std::span<const double> cp) { return e.config_deviation(desired, cp); },
                          seeded(5));
  EXPECT_LE(r.value, 1e-3);
}

TEST(MFParameterization, FixtureSlotsAndIdentity) {
  const auto& e = engine();
  const MFParameterization p(e.prior(), e.model());
  EXPECT_EQ(p.size(), 20u);
  const auto x = p.encode(e.prior());
  EXPECT_TRUE(p.box().contains(x));
  EXPECT_EQ(p.apply(x), e.prior());
}

TEST(MFParameterization, RepairKeepsSetsValid) {
  const auto& e = engine();
  const MFParameterization p(e.prior(), e.model());
  const auto* group = e.model().merged_group("locator");
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x;
    for (const auto& d : p.box().dims()) x.push_back(std::uniform_real_distribution<double>(d.lo, d.hi)(rng));
    const MFSet s = p.apply(x);
    ASSERT_EQ(s.contexts.size(), 4u);
    ASSERT_EQ(s.tasks.size(), 3u);
    for (const auto* set : {&s.contexts, &s.tasks}) {
      for (const auto& lv : *set) {
        for (const auto& term : lv.terms()) {
          const auto v = term.mf.vertices();
          for (std::size_t k = 1; k < v.size(); ++k) EXPECT_LT(v[k - 1].x, v[k].x);
          EXPECT_GE(v.front().x, lv.domain().lo);
          EXPECT_LE(v.back().x, lv.domain().hi);
        }
      }
    }
    const auto& loc = s.tasks[0];
    for (const auto& v : loc.term(*loc.term_index("Network")).mf.vertices()) EXPECT_LE(v.x, group->split);
    for (const auto& v : loc.term(*loc.term_index("GPS")).mf.vertices()) EXPECT_GE(v.x, group->split);
  }
}

TEST(KnowledgeBase, NearestExamples) {
  const auto& e = engine();
  auto kb = make_pr_knowledge(e);
  EXPECT_FALSE(kb.find_nearest(std::vector<double>{400, 100, 50, 256}));
  EXPECT_EQ(&kb.nearest_mfs(std::vector<double>{400, 100, 50, 256}), &kb.prior());

  const auto& box = e.context_space();
  std::vector<double> lo, hi, q, mid;
  for (const auto& d : box.dims()) {
    lo.push_back(d.lo);
    hi.push_back(d.hi);
    mid.push_back(d.mid());
  }
  q = lo;
  q[0] = box[0].lo + 0.1 * box[0].width();
  kb.append({lo, e.prior()});
  kb.append({hi, e.prior()});
  EXPECT_EQ(kb.find_nearest(q), 0u);
  EXPECT_EQ(kb.find_nearest(hi), 1u);
  EXPECT_EQ(kb.find_nearest(mid), 0u);
}

TEST(KnowledgeBase, RejectsWrongPayloadOrKey) {
  const auto& e = engine();
  auto pr = make_pr_knowledge(e);
  EXPECT_THROW(pr.append({{1, 2, 3, 4}, TSPayload{}}), std::invalid_argument);
  EXPECT_THROW(pr.append({{1, 2, 3}, e.prior()}), std::invalid_argument);
  EXPECT_THROW(pr.append({{1, 2, 3, std::numeric_limits<double>::quiet_NaN()}, e.prior()}), std::invalid_argument);
  auto sr = make_sr_state(e);
  EXPECT_THROW(sr.kb.append({{1, 2, 3, 4}, e.prior()}), std::invalid_argument);
}

TEST(KnowledgeBase, JsonRoundTripIsBitFaithful) {
  const auto& e = engine();
  auto kb = make_pr_knowledge(e);
  const MFParameterization p(e.prior(), e.model());
  std::mt19937_64 rng(31);
  for (int t = 0; t < 3; ++t) {
    std::vector<double> x;
    for (const auto& d : p.box().dims()) x.push_back(std::uniform_real_distribution<double>(d.lo, d.hi)(rng));
    kb.append({random_context(rng), p.apply(x)});
  }
  EXPECT_EQ(KnowledgeBase::from_json(kb.to_json()), kb);

  auto sr = make_sr_state(e);
  std::vector<KnowledgeEntry> entries;
  for (int c = 0; c < 3; ++c) {
    TSPayload payload{{0.1 * c + 1.0 / 3.0, 0.2, 0.3, 0.4},
                      {{0.1, 1.0 / 7.0, 0.2, 0.3, 0.4}, {0.0, 0.1, 0.2, 0.3, 0.4}, {std::sqrt(2.0), 0, 0, 0, 1e-300}}};
    entries.push_back({e.context_space().denormalize(payload.center), payload});
  }
  sr.kb.replace_entries(entries);
  EXPECT_EQ(KnowledgeBase::from_json(sr.kb.to_json()), sr.kb);
}

TEST(PrStep, InfiniteThresholdAlwaysReuses) {
  const auto& e = engine();
  auto kb = make_pr_knowledge(e);
  std::mt19937_64 rng(41);
  PRSettings s{small_ga(1), small_ga(2)};
  for (int t = 0; t < 5; ++t) {
    const auto d = pr_step(e, random_context(rng), std::numeric_limits<double>::infinity(), kb, s);
    EXPECT_EQ(d.mode, Mode::reused);
  }
  EXPECT_TRUE(kb.empty());
}

TEST(PrStep, ZeroThresholdLearnsAndAppendsOneEntry) {
  const auto& e = engine();
  auto kb = make_pr_knowledge(e);
  std::mt19937_64 rng(42);
  PRSettings s{small_ga(1), small_ga(2)};
  for (std::size_t t = 1; t <= 3; ++t) {
    const auto mv = random_context(rng);
    const auto d = pr_step(e, mv, 0.0, kb, s);
    EXPECT_EQ(d.mode, Mode::learned);
    EXPECT_EQ(kb.size(), t);
    EXPECT_EQ(kb.entries().back().key, mv);
    EXPECT_TRUE(e.config_space().contains(d.cp));
  }
}

TEST(PrStep, ReuseBranchLeavesKnowledgeUntouched) {
  const auto& e = engine();
  auto kb = make_pr_knowledge(e);
  std::mt19937_64 rng(43);
  PRSettings s{small_ga(1), small_ga(2)};
  pr_step(e, random_context(rng), 0.0, kb, s);
  const auto before = kb;
  const auto d = pr_step(e, random_context(rng), 1.0, kb, s);
  EXPECT_EQ(d.mode, Mode::reused);
  EXPECT_EQ(kb, before);
}

TEST(SrStep, ClusterCountGuard) {
  bool g = false;
  EXPECT_EQ(sr_cluster_count(53, 50, 53, g), 3u);
  EXPECT_FALSE(g);
  EXPECT_EQ(sr_cluster_count(51, 50, 51, g), 2u);
  EXPECT_TRUE(g);
  EXPECT_EQ(sr_cluster_count(100, 50, 60, g), 2u);
  EXPECT_TRUE(g);
  EXPECT_EQ(sr_cluster_count(60, 50, 5, g), 5u);
  EXPECT_TRUE(g);
  EXPECT_EQ(sr_cluster_count(5, 0, 1, g), 1u);
  EXPECT_TRUE(g);
}

TEST(SrStep, WarmupThenReuseOrRetrain) {
  const auto& e = engine();
  auto state = make_sr_state(e);
  SRSettings s;
  s.warmup = 4;
  s.ga = small_ga(3);
  std::mt19937_64 rng(44);
  for (std::size_t t = 1; t <= 4; ++t) {
    const auto d = sr_step(e, random_context(rng), 0.05, state, t, s);
    EXPECT_EQ(d.mode, Mode::optimized);
    EXPECT_EQ(state.samples.size(), t);
    EXPECT_EQ(state.kb.empty(), t < 4);
  }
  EXPECT_EQ(state.kb.size(), 2u);

  const auto before = state.kb;
  const auto samples_before = state.samples.size();
  const auto reused = sr_step(e, random_context(rng), 1.0, state, 5, s);
  EXPECT_EQ(reused.mode, Mode::reused);
  EXPECT_EQ(state.kb, before);
  EXPECT_EQ(state.samples.size(), samples_before);

  const auto learned = sr_step(e, random_context(rng), 0.0, state, 6, s);
  EXPECT_EQ(learned.mode, Mode::learned);
  EXPECT_EQ(state.samples.size(), samples_before + 1);
  EXPECT_EQ(state.kb.size(), 2u);  // 6 mod 4 = 2
  EXPECT_TRUE(e.config_space().contains(learned.cp));
}

TEST(SrStep, RetrainDoesNotRaiseClusterMse) {
  const auto& e = engine();
  auto state = make_sr_state(e);
  std::mt19937_64 rng(45);
  SRSettings s;
  s.ga = small_ga(4);
  for (int i = 0; i < 12; ++i) {
    const auto mv = random_context(rng);
    state.samples.push_back({mv, e.backward_reason(mv, small_ga(50 + i)).cp});
  }
  unsigned flags = 0;
  const auto r = sr_retrain(e, state, 3, s, flags);
  for (std::size_t c = 0; c < r.cluster_mse.size(); ++c) EXPECT_LE(r.cluster_mse[c], r.cluster_initial_mse[c]);
  EXPECT_EQ(state.kb.size(), 3u);
}

TEST(Schemas, ModeSequencesAreDeterministic) {
  const auto& e = engine();
  auto run = [&] {
    auto kb = make_pr_knowledge(e);
    auto state = make_sr_state(e);
    SRSettings s;
    s.warmup = 3;
    s.ga = small_ga(8);
    PRSettings ps{small_ga(9), small_ga(10)};
    std::mt19937_64 rng(46);
    std::vector<std::pair<Mode, std::vector<double>>> out;
    for (std::size_t t = 1; t <= 6; ++t) {
      const auto mv = random_context(rng);
      const auto a = pr_step(e, mv, 0.002, kb, ps);
      const auto b = sr_step(e, mv, 0.002, state, t, s);
      out.emplace_back(a.mode, a.cp);
      out.emplace_back(b.mode, b.cp);
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}
