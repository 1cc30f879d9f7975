// fuzzyreq command-line driver. Exit codes: 0 success, 1 config error,
// 2 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "fuzzyreq/errors.hpp"
#include "fuzzyreq/harness.hpp"
#include "fuzzyreq/model_io.hpp"
#include "fuzzyreq/rule_generation.hpp"
#include "json.hpp"

using namespace fuzzyreq;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model model_or_fixture(const std::string& path) { return path.empty() ? load_fixture() : load_model(path); }

void print_summary(const RunReport& r) {
  const auto& a = r.aggregates;
  std::printf(
      "%s/%s threshold=%g steps=%zu median_dev=%.6g mean_dev=%.6g naive=%zu optimized=%zu reused=%zu learned=%zu "
      "success=%zu mean_wall=%.6gs steady_wall=%.6gs%s\n",
      std::string(to_string(r.config.schema)).c_str(), std::string(to_string(r.config.trace)).c_str(),
      r.config.threshold, a.steps, a.median_deviation, a.mean_deviation, a.naive, a.optimized, a.reused, a.learned,
      a.success, a.mean_wall_time, a.steady_mean_wall_time, r.complete ? "" : " INCOMPLETE");
}

int finish_run(const RunReport& r, const std::filesystem::path& dir) {
  emit_report(r, {dir / "report.csv", dir / "report.json"});
  if (r.knowledge) r.knowledge->save(dir / "kb.json");
  print_summary(r);
  if (!r.complete) {
    std::cerr << "error: " << r.error << "\n";
    return kRuntimeError;
  }
  return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out) {
  const ReasoningEngine engine(model_or_fixture(cfg.model));
  return finish_run(run_experiment(cfg, engine), out);
}

int cmd_rulegen(const std::string& relation, const std::string& model_path) {
  auto kind = parse_relation_kind(relation);
  if (!kind) {
    std::string upper;
    for (char c : relation) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    kind = parse_relation_kind(upper);
  }
  if (!kind) throw ConfigError("--relation", "unknown relation '" + relation + "' (evo, sat, adp)");
  const Model model = model_or_fixture(model_path);
  const auto& rel = model.relation(*kind);
  const auto sources = model.variables(rel.sources);
  const auto targets = model.variables(rel.targets);
  std::vector<std::size_t> counts;
  for (const auto& lv : sources) counts.push_back(lv.term_count());
  const auto bm = boundary_matrix(rel.weights, counts);
  const auto rules = generate_ruleset(rel, model);

  json out;
  out["relation"] = to_string(*kind);
  json bounds = json::array();
  for (const auto& c : bm.columns) bounds.push_back({c.lo, c.hi});
  out["boundary_matrix"] = bounds;
  json jr = json::array();
  for (const auto& r : rules) {
    json ifs = json::object();
    json thens = json::object();
    for (const auto& c : r.antecedent) ifs[sources[c.variable].name()] = sources[c.variable].term(c.term).label;
    for (const auto& c : r.consequent) thens[targets[c.variable].name()] = targets[c.variable].term(c.term).label;
    jr.push_back({{"if", ifs}, {"then", thens}});
  }
  out["rules"] = jr;
  std::cout << out.dump(2) << "\n";
  return kOk;
}

std::string threshold_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

int cmd_sweep(const std::string& config_path) {
  const SweepConfig sweep = sweep_config_from_json(read_text(config_path));
  const ReasoningEngine engine(model_or_fixture(sweep.base.model));
  const std::filesystem::path root = sweep.out;
  std::ostringstream summary;
  summary << "schema,trace,threshold,steps,median_deviation,mean_deviation,naive,optimized,reused,learned,success,"
             "mean_wall_time_s,steady_mean_wall_time_s,complete\n";
  int status = kOk;
  for (auto schema : sweep.schemas) {
    for (auto trace : sweep.traces) {
      // Thresholds only matter for the knowledge-reusing schemas.
      const bool uses_threshold = schema == SchemaKind::pr || schema == SchemaKind::sr;
      const std::vector<double> thresholds = uses_threshold ? sweep.thresholds : std::vector<double>{sweep.base.threshold};
      for (double thr : thresholds) {
        ExperimentConfig cfg = sweep.base;
        cfg.schema = schema;
        cfg.trace = trace;
        cfg.threshold = thr;
        const auto dir = root / (std::string(to_string(schema)) + "_" + std::string(to_string(trace)) + "_" +
                                 threshold_tag(thr));
        const auto r = run_experiment(cfg, engine);
        if (finish_run(r, dir) != kOk) status = kRuntimeError;
        const auto& a = r.aggregates;
        summary << to_string(schema) << ',' << to_string(trace) << ',' << thr << ',' << a.steps << ','
                << a.median_deviation << ',' << a.mean_deviation << ',' << a.naive << ',' << a.optimized << ','
                << a.reused << ',' << a.learned << ',' << a.success << ',' << a.mean_wall_time << ','
                << a.steady_mean_wall_time << ',' << (r.complete ? 1 : 0) << '\n';
      }
    }
  }
  std::filesystem::create_directories(root);
  std::ofstream(root / "summary.csv") << summary.str();
  return status;
}

int cmd_inspect_kb(const std::string& path) {
  const auto kb = KnowledgeBase::load(path);
  std::printf("kind: %s\nentries: %zu\n", std::string(to_string(kb.kind())).c_str(), kb.size());
  std::size_t i = 0;
  for (const auto& e : kb.entries()) {
    std::printf("[%zu] key=(", i++);
    for (std::size_t k = 0; k < e.key.size(); ++k) std::printf("%s%.6g", k ? ", " : "", e.key[k]);
    std::printf(")");
    if (const auto* ts = std::get_if<TSPayload>(&e.payload)) {
      std::printf(" outputs=%zu", ts->coefficients.size());
    } else {
      std::printf(" mf_set");
    }
    std::printf("\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy-requirements self-adaptation engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", engine_version());

  ExperimentConfig cfg;
  std::string schema = "fr";
  std::string context = "derivable";
  std::string out = "out";
  auto* sim = app.add_subcommand("simulate", "Run one schema over a generated context trace");
  sim->add_option("--schema", schema, "fr|br|pr|sr")->check(CLI::IsMember({"fr", "br", "pr", "sr"}));
  sim->add_option("--context", context, "derivable|quasi|noisy")
      ->check(CLI::IsMember({"derivable", "quasi", "quasi_noisy", "noisy"}));
  sim->add_option("--steps", cfg.steps, "Number of time steps")->capture_default_str();
  sim->add_option("--threshold", cfg.threshold, "Reuse threshold on the weighted deviation")->capture_default_str();
  sim->add_option("--seed", cfg.seed, "Run seed")->capture_default_str();
  sim->add_option("--warmup", cfg.warmup, "SR warm-up length T")->capture_default_str();
  sim->add_option("--model", cfg.model, "Model JSON (default: built-in fixture)");
  sim->add_option("--out", out, "Output directory")->capture_default_str();

  std::string relation;
  std::string model_path;
  auto* rg = app.add_subcommand("rulegen", "Print the generated rule set of one relation as JSON");
  rg->add_option("--relation", relation, "evo|sat|adp")->required();
  rg->add_option("--model", model_path, "Model JSON (default: built-in fixture)");

  std::string sweep_path;
  auto* sw = app.add_subcommand("sweep", "Run a schema x trace x threshold grid");
  sw->add_option("--config", sweep_path, "Sweep config JSON")->required();

  std::string kb_path;
  auto* ik = app.add_subcommand("inspect-kb", "Summarize a saved knowledge base");
  ik->add_option("file", kb_path, "Knowledge base JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sim) {
      cfg.schema = *parse_schema_kind(schema);
      cfg.trace = *parse_trace_kind(context);
      cfg.validate();
      return cmd_simulate(cfg, out);
    }
    if (*rg) return cmd_rulegen(relation, model_path);
    if (*sw) return cmd_sweep(sweep_path);
    if (*ik) return cmd_inspect_kb(kb_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
