#include "fuzzyreq/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "fuzzyreq/errors.hpp"
#include "fuzzyreq/model_io.hpp"
#include "json_util.hpp"

#ifndef FUZZYREQ_VERSION
#define FUZZYREQ_VERSION "0.0.0"
#endif

namespace fuzzyreq {

using detail::json;

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::derivable: return "derivable";
    case TraceKind::quasi_noisy: return "quasi_noisy";
    case TraceKind::noisy: return "noisy";
  }
  return "?";
}

std::optional<TraceKind> parse_trace_kind(std::string_view s) {
  if (s == "derivable") return TraceKind::derivable;
  if (s == "quasi" || s == "quasi_noisy") return TraceKind::quasi_noisy;
  if (s == "noisy") return TraceKind::noisy;
  return std::nullopt;
}

std::string_view to_string(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::fr: return "fr";
    case SchemaKind::br: return "br";
    case SchemaKind::pr: return "pr";
    case SchemaKind::sr: return "sr";
  }
  return "?";
}

std::optional<SchemaKind> parse_schema_kind(std::string_view s) {
  if (s == "fr") return SchemaKind::fr;
  if (s == "br") return SchemaKind::br;
  if (s == "pr") return SchemaKind::pr;
  if (s == "sr") return SchemaKind::sr;
  return std::nullopt;
}

TraceParams default_trace_params(const SpaceBox& contexts) {
  static constexpr double kPeriods[] = {100.0, 125.0, 80.0, 150.0};
  static constexpr double kPhases[] = {0.0, 1.0, 2.0, 3.0};
  TraceParams p;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const auto& d = contexts[i];
    p.contexts.push_back({d.mid(), 0.4 * d.width(), kPeriods[i % 4], kPhases[i % 4]});
  }
  return p;
}

void validate_trace_params(const TraceParams& params, const SpaceBox& contexts) {
  if (params.contexts.size() != contexts.size()) {
    throw ConfigError("/trace_params/contexts", "expected " + std::to_string(contexts.size()) + " entries");
  }
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const auto& s = params.contexts[i];
    const auto& d = contexts[i];
    const std::string at = "/trace_params/contexts/" + std::to_string(i);
    if (!std::isfinite(s.center) || !d.contains(s.center)) throw ConfigError(at + "/center", "outside the domain");
    if (!(s.amplitude >= 0.0) || s.amplitude > 0.5 * d.width()) {
      throw ConfigError(at + "/amplitude", "must be in [0, half the domain width]");
    }
    if (!(s.period > 0.0) || !std::isfinite(s.period)) throw ConfigError(at + "/period", "must be positive");
    if (!std::isfinite(s.phase)) throw ConfigError(at + "/phase", "must be finite");
  }
  if (!(params.noise_fraction >= 0.0) || !std::isfinite(params.noise_fraction)) {
    throw ConfigError("/trace_params/noise_fraction", "must be non-negative");
  }
}

ContextTrace generate_trace(TraceKind kind, std::size_t steps, std::uint64_t seed, const TraceParams& params,
                            const SpaceBox& contexts) {
  if (steps == 0) throw std::invalid_argument("generate_trace: steps must be >= 1");
  validate_trace_params(params, contexts);
  ContextTrace trace{kind, seed, params, {}};
  trace.steps.reserve(steps);
  std::mt19937_64 rng(seed);
  const std::size_t n = contexts.size();
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = contexts[i];
      if (kind == TraceKind::noisy) {
        v[i] = std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
        continue;
      }
      const auto& s = params.contexts[i];
      double x = s.center + s.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / s.period + s.phase);
      if (kind == TraceKind::quasi_noisy && params.noise_fraction > 0.0) {
        x += std::normal_distribution<double>(0.0, params.noise_fraction * d.width())(rng);
      }
      v[i] = d.clamp(x);
    }
    trace.steps.push_back(std::move(v));
  }
  return trace;
}

void ExperimentConfig::validate() const {
  if (steps == 0) throw ConfigError("/steps", "must be >= 1");
  if (!(threshold >= 0.0)) throw ConfigError("/threshold", "must be non-negative");
  auto ga_check = [](const GASettings& g, const char* where) {
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where, e.what());
    }
  };
  ga_check(ga, "/ga");
  ga_check(mf_ga, "/mf_ga");
  try {
    trainer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/sr/trainer", e.what());
  }
  if (!(fcm.fuzzifier > 1.0)) throw ConfigError("/sr/fcm/fuzzifier", "must be > 1");
  if (!(fcm.tolerance > 0.0)) throw ConfigError("/sr/fcm/tolerance", "must be positive");
  if (fcm.max_iterations == 0) throw ConfigError("/sr/fcm/max_iterations", "must be >= 1");
}

namespace {

json ga_to_json(const GASettings& g) {
  return {{"chrom_length", g.chrom_length},       {"population_size", g.population_size},
          {"max_generations", g.max_generations}, {"generation_gap", g.generation_gap},
          {"crossover_rate", g.crossover_rate},   {"mutation_rate", g.mutation_rate}};
}

template <typename T>
void read_uint(const json& obj, const std::string& path, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(path + "/" + key, "expected a non-negative integer");
  out = static_cast<T>(v.get<std::uint64_t>());
}

void read_double(const json& obj, const std::string& path, const char* key, double& out) {
  if (obj.contains(key)) out = detail::get_number(obj.at(key), path + "/" + key);
}

GASettings ga_from_json(const json& j, const std::string& path, GASettings g) {
  detail::reject_unknown(j, path, {"chrom_length", "population_size", "max_generations", "generation_gap",
                                   "crossover_rate", "mutation_rate"});
  read_uint(j, path, "chrom_length", g.chrom_length);
  read_uint(j, path, "population_size", g.population_size);
  read_uint(j, path, "max_generations", g.max_generations);
  read_double(j, path, "generation_gap", g.generation_gap);
  read_double(j, path, "crossover_rate", g.crossover_rate);
  read_double(j, path, "mutation_rate", g.mutation_rate);
  return g;
}

json trace_params_to_json(const TraceParams& p) {
  json ctx = json::array();
  for (const auto& s : p.contexts) {
    ctx.push_back({{"center", s.center}, {"amplitude", s.amplitude}, {"period", s.period}, {"phase", s.phase}});
  }
  return {{"contexts", ctx}, {"noise_fraction", p.noise_fraction}};
}

TraceParams trace_params_from_json(const json& j, const std::string& path) {
  detail::reject_unknown(j, path, {"contexts", "noise_fraction"});
  TraceParams p;
  const auto& ctx = detail::require(j, path, "contexts");
  if (!ctx.is_array()) throw ConfigError(path + "/contexts", "expected an array");
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const std::string at = path + "/contexts/" + std::to_string(i);
    detail::reject_unknown(ctx[i], at, {"center", "amplitude", "period", "phase"});
    Sinusoid s;
    s.center = detail::get_number(detail::require(ctx[i], at, "center"), at + "/center");
    s.amplitude = detail::get_number(detail::require(ctx[i], at, "amplitude"), at + "/amplitude");
    s.period = detail::get_number(detail::require(ctx[i], at, "period"), at + "/period");
    read_double(ctx[i], at, "phase", s.phase);
    p.contexts.push_back(s);
  }
  read_double(j, path, "noise_fraction", p.noise_fraction);
  return p;
}

json config_to_json(const ExperimentConfig& c) {
  json j = {{"schema", to_string(c.schema)},
            {"trace", to_string(c.trace)},
            {"steps", c.steps},
            {"threshold", c.threshold},
            {"seed", c.seed},
            {"model", c.model},
            {"ga", ga_to_json(c.ga)},
            {"mf_ga", ga_to_json(c.mf_ga)},
            {"sr",
             {{"warmup", c.warmup},
              {"trainer", {{"epochs", c.trainer.epochs}, {"goal", c.trainer.goal}, {"rate", c.trainer.rate}}},
              {"fcm",
               {{"fuzzifier", c.fcm.fuzzifier},
                {"tolerance", c.fcm.tolerance},
                {"max_iterations", c.fcm.max_iterations}}}}}};
  if (c.trace_params) j["trace_params"] = trace_params_to_json(*c.trace_params);
  return j;
}

ExperimentConfig config_from_json(const json& j, const std::string& path) {
  detail::reject_unknown(j, path,
                         {"schema", "trace", "steps", "threshold", "seed", "model", "trace_params", "ga", "mf_ga", "sr"});
  ExperimentConfig c;
  if (j.contains("schema")) {
    const auto s = detail::get_as<std::string>(j.at("schema"), path + "/schema");
    const auto k = parse_schema_kind(s);
    if (!k) throw ConfigError(path + "/schema", "unknown schema '" + s + "' (fr, br, pr, sr)");
    c.schema = *k;
  }
  if (j.contains("trace")) {
    const auto s = detail::get_as<std::string>(j.at("trace"), path + "/trace");
    const auto k = parse_trace_kind(s);
    if (!k) throw ConfigError(path + "/trace", "unknown trace kind '" + s + "' (derivable, quasi, noisy)");
    c.trace = *k;
  }
  read_uint(j, path, "steps", c.steps);
  read_double(j, path, "threshold", c.threshold);
  read_uint(j, path, "seed", c.seed);
  if (j.contains("model")) c.model = detail::get_as<std::string>(j.at("model"), path + "/model");
  if (j.contains("trace_params")) c.trace_params = trace_params_from_json(j.at("trace_params"), path + "/trace_params");
  if (j.contains("ga")) c.ga = ga_from_json(j.at("ga"), path + "/ga", c.ga);
  if (j.contains("mf_ga")) c.mf_ga = ga_from_json(j.at("mf_ga"), path + "/mf_ga", c.mf_ga);
  if (j.contains("sr")) {
    const auto& sr = j.at("sr");
    const std::string sp = path + "/sr";
    detail::reject_unknown(sr, sp, {"warmup", "trainer", "fcm"});
    read_uint(sr, sp, "warmup", c.warmup);
    if (sr.contains("trainer")) {
      const auto& t = sr.at("trainer");
      detail::reject_unknown(t, sp + "/trainer", {"epochs", "goal", "rate"});
      read_uint(t, sp + "/trainer", "epochs", c.trainer.epochs);
      read_double(t, sp + "/trainer", "goal", c.trainer.goal);
      read_double(t, sp + "/trainer", "rate", c.trainer.rate);
    }
    if (sr.contains("fcm")) {
      const auto& f = sr.at("fcm");
      detail::reject_unknown(f, sp + "/fcm", {"fuzzifier", "tolerance", "max_iterations"});
      read_double(f, sp + "/fcm", "fuzzifier", c.fcm.fuzzifier);
      read_double(f, sp + "/fcm", "tolerance", c.fcm.tolerance);
      read_uint(f, sp + "/fcm", "max_iterations", c.fcm.max_iterations);
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + e.where(), e.detail());
  }
  return c;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + 16, v, 16);
  std::string s(buf, end);
  return std::string(16 - s.size(), '0') + s;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::naive, Mode::optimized, Mode::reused, Mode::learned}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  return config_from_json(detail::parse_json(text), "");
}

std::string experiment_config_to_json(const ExperimentConfig& config) { return config_to_json(config).dump(2); }

std::uint64_t step_seed(std::uint64_t run_seed, std::size_t step, std::uint64_t stream) {
  // splitmix64 over a combination of the three inputs
  std::uint64_t z = run_seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(step) * 8 + stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Aggregates aggregate(const std::vector<StepRecord>& steps, double threshold, std::size_t warmup) {
  Aggregates a;
  a.steps = steps.size();
  if (steps.empty()) return a;
  std::vector<double> devs;
  devs.reserve(steps.size());
  double dev_sum = 0.0;
  double time_sum = 0.0;
  double steady_sum = 0.0;
  std::size_t steady_n = 0;
  for (const auto& s : steps) {
    devs.push_back(s.deviation);
    dev_sum += s.deviation;
    time_sum += s.wall_time;
    if (s.step > warmup) {
      steady_sum += s.wall_time;
      ++steady_n;
    }
    if (s.deviation <= threshold) ++a.success;
    switch (s.mode) {
      case Mode::naive: ++a.naive; break;
      case Mode::optimized: ++a.optimized; break;
      case Mode::reused: ++a.reused; break;
      case Mode::learned: ++a.learned; break;
    }
  }
  std::sort(devs.begin(), devs.end());
  const std::size_t n = devs.size();
  a.median_deviation = n % 2 ? devs[n / 2] : 0.5 * (devs[n / 2 - 1] + devs[n / 2]);
  a.mean_deviation = dev_sum / static_cast<double>(n);
  a.mean_wall_time = time_sum / static_cast<double>(n);
  a.steady_mean_wall_time = steady_n ? steady_sum / static_cast<double>(steady_n) : 0.0;
  return a;
}

std::string engine_version() { return FUZZYREQ_VERSION; }

RunReport run_experiment(const ExperimentConfig& config, const ReasoningEngine& engine) {
  config.validate();
  RunReport report;
  report.config = config;
  report.provenance = {hex64(fnv1a(config_to_json(config).dump())), config.seed, engine_version()};

  const auto params = config.trace_params ? *config.trace_params : default_trace_params(engine.context_space());
  const auto trace = generate_trace(config.trace, config.steps, step_seed(config.seed, 0, 7), params,
                                    engine.context_space());

  std::optional<KnowledgeBase> pr_kb;
  std::optional<SRState> sr_state;
  if (config.schema == SchemaKind::pr) pr_kb = make_pr_knowledge(engine);
  if (config.schema == SchemaKind::sr) sr_state = make_sr_state(engine);

  using clock = std::chrono::steady_clock;
  try {
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
      const std::size_t step = t + 1;
      const auto& mv = trace.steps[t];
      GASettings ga = config.ga;
      ga.seed = step_seed(config.seed, step, 1);

      const auto start = clock::now();
      AdaptationDecision d;
      switch (config.schema) {
        case SchemaKind::fr: d = engine.forward_reason(mv); break;
        case SchemaKind::br: d = engine.backward_reason(mv, ga); break;
        case SchemaKind::pr: {
          PRSettings s{ga, config.mf_ga};
          s.mf_ga.seed = step_seed(config.seed, step, 2);
          d = pr_step(engine, mv, config.threshold, *pr_kb, s);
          break;
        }
        case SchemaKind::sr: {
          SRSettings s{config.warmup, ga, config.trainer, config.fcm};
          s.trainer.seed = step_seed(config.seed, step, 3);
          s.fcm.seed = step_seed(config.seed, step, 4);
          d = sr_step(engine, mv, config.threshold, *sr_state, step, s);
          break;
        }
      }
      const double elapsed = std::chrono::duration<double>(clock::now() - start).count();

      report.steps.push_back({step, mv, std::move(d.cp), std::move(d.sd_desired), std::move(d.sd_actual),
                              d.deviation, d.mode, elapsed, d.flags});
    }
    report.complete = true;
  } catch (const std::exception& e) {
    report.error = "step " + std::to_string(report.steps.size() + 1) + ": " + e.what();
  }

  if (pr_kb) report.knowledge = std::move(*pr_kb);
  if (sr_state) report.knowledge = std::move(sr_state->kb);
  report.aggregates = aggregate(report.steps, config.threshold, config.warmup);
  return report;
}

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ReasoningEngine engine(config.model.empty() ? load_fixture() : load_model(config.model));
  return run_experiment(config, engine);
}

std::string report_csv(const RunReport& report) {
  std::size_t nac = 0, ncp = 0, nsd = 0;
  for (const auto& s : report.steps) {
    nac = std::max(nac, s.mv.size());
    ncp = std::max(ncp, s.cp.size());
    nsd = std::max(nsd, s.sd_desired.size());
  }
  // Header widths follow the model; an empty report falls back to the fixture shape.
  if (report.steps.empty()) {
    nac = 4;
    ncp = 3;
    nsd = 3;
  }
  std::ostringstream out;
  out << "step";
  for (std::size_t i = 1; i <= nac; ++i) out << ",ac" << i;
  for (std::size_t i = 1; i <= ncp; ++i) out << ",cp" << i;
  for (std::size_t i = 1; i <= nsd; ++i) out << ",sd_d" << i;
  for (std::size_t i = 1; i <= nsd; ++i) out << ",sd_a" << i;
  out << ",deviation,mode,wall_time_s\n";
  for (const auto& s : report.steps) {
    out << s.step;
    for (double v : s.mv) out << ',' << num(v);
    for (double v : s.cp) out << ',' << num(v);
    for (double v : s.sd_desired) out << ',' << num(v);
    for (double v : s.sd_actual) out << ',' << num(v);
    out << ',' << num(s.deviation) << ',' << to_string(s.mode) << ',' << num(s.wall_time) << '\n';
  }
  return out.str();
}

std::string report_json(const RunReport& report) {
  const auto& a = report.aggregates;
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"step", s.step},
                     {"mv", s.mv},
                     {"cp", s.cp},
                     {"sd_desired", s.sd_desired},
                     {"sd_actual", s.sd_actual},
                     {"deviation", s.deviation},
                     {"mode", to_string(s.mode)},
                     {"wall_time", s.wall_time},
                     {"flags", s.flags}});
  }
  json j = {{"config", config_to_json(report.config)},
            {"complete", report.complete},
            {"error", report.error},
            {"provenance",
             {{"config_hash", report.provenance.config_hash},
              {"seed", report.provenance.seed},
              {"version", report.provenance.version}}},
            {"aggregates",
             {{"steps", a.steps},
              {"median_deviation", a.median_deviation},
              {"mean_deviation", a.mean_deviation},
              {"naive", a.naive},
              {"optimized", a.optimized},
              {"reused", a.reused},
              {"learned", a.learned},
              {"success", a.success},
              {"mean_wall_time", a.mean_wall_time},
              {"steady_mean_wall_time", a.steady_mean_wall_time}}},
            {"steps", steps}};
  return j.dump(1);
}

void emit_report(const RunReport& report, const ReportPaths& paths) {
  write_file(paths.csv, report_csv(report));
  write_file(paths.json, report_json(report));
}

RunReport report_from_json(const std::string& text) {
  const json j = detail::parse_json(text);
  detail::reject_unknown(j, "", {"config", "complete", "error", "provenance", "aggregates", "steps"});
  RunReport r;
  r.config = config_from_json(detail::require(j, "", "config"), "/config");
  r.complete = detail::get_as<bool>(detail::require(j, "", "complete"), "/complete");
  r.error = detail::get_as<std::string>(detail::require(j, "", "error"), "/error");

  const auto& p = detail::require(j, "", "provenance");
  detail::reject_unknown(p, "/provenance", {"config_hash", "seed", "version"});
  r.provenance.config_hash = detail::get_as<std::string>(detail::require(p, "/provenance", "config_hash"), "/provenance/config_hash");
  r.provenance.seed = detail::get_as<std::uint64_t>(detail::require(p, "/provenance", "seed"), "/provenance/seed");
  r.provenance.version = detail::get_as<std::string>(detail::require(p, "/provenance", "version"), "/provenance/version");

  const auto& steps = detail::require(j, "", "steps");
  if (!steps.is_array()) throw ConfigError("/steps", "expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string at = "/steps/" + std::to_string(i);
    const auto& s = steps[i];
    detail::reject_unknown(s, at,
                           {"step", "mv", "cp", "sd_desired", "sd_actual", "deviation", "mode", "wall_time", "flags"});
    StepRecord rec;
    rec.step = detail::get_as<std::size_t>(detail::require(s, at, "step"), at + "/step");
    rec.mv = detail::get_as<std::vector<double>>(detail::require(s, at, "mv"), at + "/mv");
    rec.cp = detail::get_as<std::vector<double>>(detail::require(s, at, "cp"), at + "/cp");
    rec.sd_desired = detail::get_as<std::vector<double>>(detail::require(s, at, "sd_desired"), at + "/sd_desired");
    rec.sd_actual = detail::get_as<std::vector<double>>(detail::require(s, at, "sd_actual"), at + "/sd_actual");
    rec.deviation = detail::get_number(detail::require(s, at, "deviation"), at + "/deviation");
    const auto mode = detail::get_as<std::string>(detail::require(s, at, "mode"), at + "/mode");
    const auto m = parse_mode(mode);
    if (!m) throw ConfigError(at + "/mode", "unknown mode '" + mode + "'");
    rec.mode = *m;
    rec.wall_time = detail::get_number(detail::require(s, at, "wall_time"), at + "/wall_time");
    rec.flags = detail::get_as<unsigned>(detail::require(s, at, "flags"), at + "/flags");
    r.steps.push_back(std::move(rec));
  }

  const auto& a = detail::require(j, "", "aggregates");
  detail::reject_unknown(a, "/aggregates",
                         {"steps", "median_deviation", "mean_deviation", "naive", "optimized", "reused", "learned",
                          "success", "mean_wall_time", "steady_mean_wall_time"});
  auto count = [&](const char* k) {
    return detail::get_as<std::size_t>(detail::require(a, "/aggregates", k), std::string("/aggregates/") + k);
  };
  auto real = [&](const char* k) {
    return detail::get_number(detail::require(a, "/aggregates", k), std::string("/aggregates/") + k);
  };
  r.aggregates = {count("steps"),   real("median_deviation"), real("mean_deviation"), count("naive"),
                  count("optimized"), count("reused"),        count("learned"),       count("success"),
                  real("mean_wall_time"), real("steady_mean_wall_time")};

  if (aggregate(r.steps, r.config.threshold, r.config.warmup) != r.aggregates) {
    throw ConfigError("/aggregates", "do not match the step records");
  }
  return r;
}

RunReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return report_from_json(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + (e.where().empty() ? "" : ":" + e.where()), e.detail());
  }
}

SweepConfig sweep_config_from_json(const std::string& text) {
  const json j = detail::parse_json(text);
  detail::reject_unknown(j, "", {"base", "schemas", "traces", "thresholds", "out"});
  SweepConfig s;
  if (j.contains("base")) s.base = config_from_json(j.at("base"), "/base");
  if (j.contains("schemas")) {
    const auto names = detail::get_as<std::vector<std::string>>(j.at("schemas"), "/schemas");
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto k = parse_schema_kind(names[i]);
      if (!k) throw ConfigError("/schemas/" + std::to_string(i), "unknown schema '" + names[i] + "'");
      s.schemas.push_back(*k);
    }
  } else {
    s.schemas = {SchemaKind::fr, SchemaKind::br, SchemaKind::pr, SchemaKind::sr};
  }
  if (j.contains("traces")) {
    const auto names = detail::get_as<std::vector<std::string>>(j.at("traces"), "/traces");
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto k = parse_trace_kind(names[i]);
      if (!k) throw ConfigError("/traces/" + std::to_string(i), "unknown trace kind '" + names[i] + "'");
      s.traces.push_back(*k);
    }
  } else {
    s.traces = {TraceKind::derivable, TraceKind::quasi_noisy, TraceKind::noisy};
  }
  if (j.contains("thresholds")) {
    s.thresholds = detail::get_as<std::vector<double>>(j.at("thresholds"), "/thresholds");
    for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
      if (!(s.thresholds[i] >= 0.0)) throw ConfigError("/thresholds/" + std::to_string(i), "must be non-negative");
    }
  } else {
    s.thresholds = {s.base.threshold};
  }
  if (j.contains("out")) s.out = detail::get_as<std::string>(j.at("out"), "/out");
  if (s.schemas.empty() || s.traces.empty() || s.thresholds.empty()) {
    throw ConfigError("", "sweep grid is empty");
  }
  return s;
}

}  // namespace fuzzyreq
