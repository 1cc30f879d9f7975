#include "fuzzyreq/schemas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fuzzyreq/rule_generation.hpp"

namespace fuzzyreq {

double weighted_deviation(std::span<const double> desired, std::span<const double> actual,
                          std::span<const double> weights) {
  if (desired.size() != actual.size() || desired.size() != weights.size()) {
    throw std::invalid_argument("weighted_deviation: length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < desired.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("weighted_deviation: negative weight");
    const double d = desired[i] - actual[i];
    num += d * d * weights[i];
    den += weights[i];
  }
  if (!(den > 0.0)) throw std::invalid_argument("weighted_deviation: all weights are zero");
  return num / den;
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::naive: return "naive";
    case Mode::optimized: return "optimized";
    case Mode::reused: return "reused";
    case Mode::learned: return "learned";
  }
  return "?";
}

namespace {

std::vector<std::string> names_of(const std::vector<const UncertainEntity*>& es) {
  std::vector<std::string> out;
  for (const auto* e : es) out.push_back(e->name());
  return out;
}

void require_full(const WeightedRelation& r, const std::vector<std::string>& src, const std::vector<std::string>& dst) {
  if (r.sources != src || r.targets != dst) {
    throw std::invalid_argument(std::string(to_string(r.kind)) +
                                " relation must span all source and target entities in declaration order");
  }
}

}  // namespace

ReasoningEngine::ReasoningEngine(Model model) : model_(std::move(model)) {
  const auto contexts = model_.by_role(Role::context);
  const auto tasks = model_.by_role(Role::task);
  const auto softgoals = model_.by_role(Role::softgoal);
  const auto cn = names_of(contexts);
  const auto tn = names_of(tasks);
  const auto sn = names_of(softgoals);
  require_full(model_.relation(RelationKind::evo), cn, sn);
  require_full(model_.relation(RelationKind::sat), tn, sn);
  require_full(model_.relation(RelationKind::adp), cn, tn);

  context_space_ = build_space(contexts);
  config_space_ = build_space(tasks);
  prior_ = {model_.variables(Role::context), model_.variables(Role::task)};
  softgoals_ = model_.variables(Role::softgoal);
  weights_ = model_.softgoal_weights();
  if (std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 0.0; })) {
    throw std::invalid_argument("softgoal weights are all zero");
  }

  evo_ = generate_ruleset(model_.relation(RelationKind::evo), model_);
  sat_ = generate_ruleset(model_.relation(RelationKind::sat), model_);
  adp_ = generate_ruleset(model_.relation(RelationKind::adp), model_);
}

std::span<const MamdaniRule> ReasoningEngine::rules(RelationKind kind) const {
  switch (kind) {
    case RelationKind::evo: return evo_;
    case RelationKind::sat: return sat_;
    case RelationKind::adp: return adp_;
  }
  throw std::invalid_argument("unknown relation kind");
}

std::vector<double> ReasoningEngine::desired_satisfaction(std::span<const double> mv) const {
  return mamdani_infer(evo_, mv, prior_.contexts, softgoals_).outputs;
}

Satisfaction ReasoningEngine::actual_satisfaction(std::span<const double> cp) const {
  auto r = mamdani_infer(sat_, cp, prior_.tasks, softgoals_);
  return {std::move(r.outputs), r.any_defaulted()};
}

InferenceResult ReasoningEngine::configure(std::span<const double> mv, const MFSet& mfs) const {
  return mamdani_infer(adp_, mv, mfs.contexts, mfs.tasks);
}

double ReasoningEngine::config_deviation(std::span<const double> desired, std::span<const double> cp) const {
  const auto sat = actual_satisfaction(cp);
  if (sat.defaulted) return std::numeric_limits<double>::infinity();
  return weighted_deviation(desired, sat.values, weights_);
}

AdaptationDecision ReasoningEngine::finish(std::vector<double> sd_desired, std::vector<double> cp, Mode mode,
                                           unsigned flags) const {
  if (config_space_.clamp(cp)) flags |= kInputClamped;
  auto sat = actual_satisfaction(cp);
  if (sat.defaulted) flags |= kInferenceDefaulted;
  AdaptationDecision d;
  d.deviation = weighted_deviation(sd_desired, sat.values, weights_);
  d.cp = std::move(cp);
  d.sd_desired = std::move(sd_desired);
  d.sd_actual = std::move(sat.values);
  d.mode = mode;
  d.flags = flags;
  return d;
}

AdaptationDecision ReasoningEngine::forward_reason(std::span<const double> mv) const {
  return forward_reason(mv, prior_);
}

AdaptationDecision ReasoningEngine::forward_reason(std::span<const double> mv, const MFSet& mfs) const {
  auto r = configure(mv, mfs);
  unsigned flags = 0;
  if (r.input_clamped) flags |= kInputClamped;
  if (r.any_defaulted()) flags |= kInferenceDefaulted;
  return finish(desired_satisfaction(mv), std::move(r.outputs), Mode::naive, flags);
}

AdaptationDecision ReasoningEngine::forward_reason(std::span<const double> mv, const TSRuleBase& base) const {
  std::vector<double> x(mv.begin(), mv.end());
  unsigned flags = context_space_.clamp(x) ? kInputClamped : 0u;
  auto y = ts_infer(base, context_space_.normalize(x));
  for (auto& v : y) v = std::clamp(v, 0.0, 1.0);
  return finish(desired_satisfaction(mv), config_space_.denormalize(y), Mode::naive, flags);
}

AdaptationDecision ReasoningEngine::backward_reason(std::span<const double> mv, const GASettings& ga) const {
  auto desired = desired_satisfaction(mv);
  const auto result =
      minimize(config_space_, [&](std::span<const double> cp) { return config_deviation(desired, cp); }, ga);
  return finish(std::move(desired), result.argmin, Mode::optimized, 0);
}

MFParameterization::MFParameterization(const MFSet& base, const Model& model) : base_(base) {
  std::vector<const LinguisticVariable*> vars;
  for (const auto& lv : base_.contexts) vars.push_back(&lv);
  for (const auto& lv : base_.tasks) vars.push_back(&lv);

  std::vector<Interval> dims;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto& lv = *vars[v];
    const auto* group = v >= base_.contexts.size() ? model.merged_group(lv.name()) : nullptr;
    for (std::size_t t = 0; t < lv.term_count(); ++t) {
      Interval bound = lv.domain();
      if (group) {
        if (lv.term(t).label == group->lower_option) bound.hi = group->split;
        if (lv.term(t).label == group->upper_option) bound.lo = group->split;
      }
      term_offset_.push_back(term_bounds_.size());
      term_bounds_.push_back(bound);
      const auto verts = lv.term(t).mf.vertices();
      for (std::size_t k = 0; k < verts.size(); ++k) {
        const double x = verts[k].x;
        const bool on_edge = x <= lv.domain().lo || x >= lv.domain().hi;
        const bool on_split = group && x == group->split;
        if (on_edge || on_split) continue;
        slots_.push_back({v, t, k});
        dims.push_back(bound);
      }
    }
  }
  box_ = SpaceBox(std::move(dims));
}

std::vector<double> MFParameterization::encode(const MFSet& mfs) const {
  std::vector<double> p;
  p.reserve(slots_.size());
  for (const auto& s : slots_) {
    const auto& lv = s.variable < mfs.contexts.size() ? mfs.contexts[s.variable]
                                                      : mfs.tasks[s.variable - mfs.contexts.size()];
    p.push_back(lv.term(s.term).mf.vertices()[s.vertex].x);
  }
  return p;
}

MFSet MFParameterization::apply(std::span<const double> params) const {
  if (params.size() != slots_.size()) throw std::invalid_argument("MFParameterization: parameter count mismatch");
  const std::size_t nc = base_.contexts.size();
  const std::size_t nv = nc + base_.tasks.size();

  // Vertex lists per variable/term, seeded from the base set.
  std::vector<std::vector<std::vector<Vertex>>> verts(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& lv = v < nc ? base_.contexts[v] : base_.tasks[v - nc];
    for (const auto& t : lv.terms()) verts[v].emplace_back(t.mf.vertices().begin(), t.mf.vertices().end());
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const auto& s = slots_[i];
    verts[s.variable][s.term][s.vertex].x = box_[i].clamp(params[i]);
  }

  MFSet out;
  std::size_t flat = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& lv = v < nc ? base_.contexts[v] : base_.tasks[v - nc];
    std::vector<Term> terms;
    for (std::size_t t = 0; t < verts[v].size(); ++t, ++flat) {
      auto& vs = verts[v][t];
      const Interval b = term_bounds_[term_offset_[flat]];
      const double eps = 1e-6 * lv.domain().width();
      std::vector<double> xs;
      for (const auto& vx : vs) xs.push_back(vx.x);
      std::sort(xs.begin(), xs.end());
      for (std::size_t k = 1; k < xs.size(); ++k) xs[k] = std::max(xs[k], xs[k - 1] + eps);
      if (xs.back() > b.hi) {
        xs.back() = b.hi;
        for (std::size_t k = xs.size() - 1; k > 0; --k) xs[k - 1] = std::min(xs[k - 1], xs[k] - eps);
      }
      for (std::size_t k = 0; k < vs.size(); ++k) vs[k].x = xs[k];
      terms.push_back({lv.term(t).label, MembershipFunction(std::move(vs))});
    }
    auto built = LinguisticVariable(lv.name(), lv.domain(), std::move(terms));
    (v < nc ? out.contexts : out.tasks).push_back(std::move(built));
  }
  return out;
}

AdaptationDecision pr_step(const ReasoningEngine& engine, std::span<const double> mv, double threshold,
                           KnowledgeBase& kb, const PRSettings& settings) {
  if (kb.kind() != KnowledgeKind::mf_sets) throw std::invalid_argument("pr_step: knowledge base must hold MF sets");
  auto fr = engine.forward_reason(mv, kb.nearest_mfs(mv));
  if (fr.deviation <= threshold) {
    fr.mode = Mode::reused;
    return fr;
  }

  auto br = engine.backward_reason(mv, settings.ga);
  const MFParameterization param(kb.prior(), engine.model());
  const auto& desired = br.sd_desired;
  const auto learned = minimize(
      param.box(),
      [&](std::span<const double> p) {
        const auto r = engine.configure(mv, param.apply(p));
        return engine.config_deviation(desired, r.outputs);
      },
      settings.mf_ga);

  std::vector<double> key(mv.begin(), mv.end());
  engine.context_space().clamp(key);
  kb.append({std::move(key), param.apply(learned.argmin)});
  br.mode = Mode::learned;
  return br;
}

SRState make_sr_state(const ReasoningEngine& engine) {
  return {KnowledgeBase(KnowledgeKind::ts_model, engine.prior(), engine.context_space(), engine.config_space()), {}};
}

KnowledgeBase make_pr_knowledge(const ReasoningEngine& engine) {
  return KnowledgeBase(KnowledgeKind::mf_sets, engine.prior(), engine.context_space(), engine.config_space());
}

std::size_t sr_cluster_count(std::size_t time, std::size_t warmup, std::size_t samples, bool& guarded) {
  const std::size_t literal = warmup > 0 ? time % warmup : 0;
  std::size_t k = std::max<std::size_t>(2, literal);
  k = std::min(k, samples);
  guarded = k != literal;
  return k;
}

TrainingResult sr_retrain(const ReasoningEngine& engine, SRState& state, std::size_t k, const SRSettings& settings,
                          unsigned& flags) {
  const auto& ctx = engine.context_space();
  const auto& cfg = engine.config_space();
  std::vector<Point> points;
  std::vector<Sample> normalized;
  points.reserve(state.samples.size());
  normalized.reserve(state.samples.size());
  for (const auto& s : state.samples) {
    std::vector<double> x = s.input;
    std::vector<double> y = s.target;
    ctx.clamp(x);
    cfg.clamp(y);
    points.push_back(ctx.normalize(x));
    normalized.push_back({points.back(), cfg.normalize(y)});
  }

  const auto clusters = fcm_cluster(points, k, settings.fcm);
  if (clusters.collapsed) flags |= kCentersCollapsed;
  auto trained = train_consequents(normalized, clusters, settings.trainer);
  if (std::find(trained.defaulted.begin(), trained.defaulted.end(), true) != trained.defaulted.end()) {
    flags |= kClusterDefaulted;
  }

  std::vector<KnowledgeEntry> entries;
  for (std::size_t c = 0; c < clusters.centers.size(); ++c) {
    entries.push_back({ctx.denormalize(clusters.centers[c]), TSPayload{clusters.centers[c], trained.coefficients[c]}});
  }
  state.kb.replace_entries(std::move(entries));
  return trained;
}

AdaptationDecision sr_step(const ReasoningEngine& engine, std::span<const double> mv, double threshold,
                           SRState& state, std::size_t time, const SRSettings& settings) {
  if (state.kb.kind() != KnowledgeKind::ts_model) throw std::invalid_argument("sr_step: knowledge base must hold a T-S model");
  auto record = [&](const AdaptationDecision& d) {
    std::vector<double> x(mv.begin(), mv.end());
    engine.context_space().clamp(x);
    state.samples.push_back({std::move(x), d.cp});
  };

  if (time <= settings.warmup) {
    auto br = engine.backward_reason(mv, settings.ga);
    record(br);
    if (time == settings.warmup) {
      bool guarded = false;
      const auto k = sr_cluster_count(time, settings.warmup, state.samples.size(), guarded);
      sr_retrain(engine, state, k, settings, br.flags);
      if (guarded) br.flags |= kClusterGuard;
    }
    return br;
  }

  if (!state.kb.empty()) {
    auto fr = engine.forward_reason(mv, state.kb.ts_rule_base(settings.fcm.fuzzifier));
    if (fr.deviation <= threshold) {
      fr.mode = Mode::reused;
      return fr;
    }
  }

  auto br = engine.backward_reason(mv, settings.ga);
  record(br);
  bool guarded = false;
  const auto k = sr_cluster_count(time, settings.warmup, state.samples.size(), guarded);
  sr_retrain(engine, state, k, settings, br.flags);
  if (guarded) br.flags |= kClusterGuard;
  br.mode = Mode::learned;
  return br;
}

}  // namespace fuzzyreq
