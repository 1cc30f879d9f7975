#pragma once

// Context traces, the per-step experiment driver, report aggregation and the
// CSV/JSON report files.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyreq/domain_model.hpp"
#include "fuzzyreq/genetic.hpp"
#include "fuzzyreq/knowledge_base.hpp"
#include "fuzzyreq/schemas.hpp"

namespace fuzzyreq {

enum class TraceKind { derivable, quasi_noisy, noisy };

std::string_view to_string(TraceKind kind);
/// Accepts "derivable", "quasi", "quasi_noisy", "noisy".
std::optional<TraceKind> parse_trace_kind(std::string_view s);

/// ac(t) = center + amplitude * sin(2 pi t / period + phase)
struct Sinusoid {
  double center = 0.0;
  double amplitude = 0.0;
  double period = 100.0;
  double phase = 0.0;

  friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

struct TraceParams {
  std::vector<Sinusoid> contexts;
  double noise_fraction = 0.02;  // quasi-noisy sigma as a fraction of the domain width

  friend bool operator==(const TraceParams&, const TraceParams&) = default;
};

/// Defaults for a context space. The first context of the fixture (bandwidth,
/// [300, 500]) gets center 400, amplitude 80, period 100, phase 0; the others
/// are centered with amplitude 0.4 of their width and their own periods and phases.
TraceParams default_trace_params(const SpaceBox& contexts);

/// Throws ConfigError on a dimension mismatch, a center outside the domain,
/// an amplitude above half the domain width, a non-positive period or a
/// negative noise fraction.
void validate_trace_params(const TraceParams& params, const SpaceBox& contexts);

struct ContextTrace {
  TraceKind kind = TraceKind::derivable;
  std::uint64_t seed = 0;
  TraceParams params;
  std::vector<std::vector<double>> steps;  // steps[t], t = 0, 1, ...
};

ContextTrace generate_trace(TraceKind kind, std::size_t steps, std::uint64_t seed, const TraceParams& params,
                            const SpaceBox& contexts);

enum class SchemaKind { fr, br, pr, sr };

std::string_view to_string(SchemaKind kind);
std::optional<SchemaKind> parse_schema_kind(std::string_view s);

struct ExperimentConfig {
  SchemaKind schema = SchemaKind::fr;
  TraceKind trace = TraceKind::derivable;
  std::size_t steps = 500;
  double threshold = 0.08;
  std::uint64_t seed = 1;
  std::string model;  // path; empty selects the built-in fixture
  std::optional<TraceParams> trace_params;
  GASettings ga;
  GASettings mf_ga;
  std::size_t warmup = 50;
  TrainerSettings trainer;
  FCMSettings fcm;

  /// Throws ConfigError.
  void validate() const;
};

/// Strict JSON reader/writer; every field is optional and defaults as above.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);

/// Seeds for one step, derived from the run seed with splitmix64.
std::uint64_t step_seed(std::uint64_t run_seed, std::size_t step, std::uint64_t stream);

struct StepRecord {
  std::size_t step = 0;  // 1-based
  std::vector<double> mv;
  std::vector<double> cp;
  std::vector<double> sd_desired;
  std::vector<double> sd_actual;
  double deviation = 0.0;
  Mode mode = Mode::naive;
  double wall_time = 0.0;  // seconds, around the schema step only
  unsigned flags = 0;
};

struct Aggregates {
  std::size_t steps = 0;
  double median_deviation = 0.0;
  double mean_deviation = 0.0;
  std::size_t naive = 0;
  std::size_t optimized = 0;
  std::size_t reused = 0;
  std::size_t learned = 0;
  std::size_t success = 0;  // deviation <= threshold
  double mean_wall_time = 0.0;
  /// Over steps after the warm-up length only; 0 when there are none.
  double steady_mean_wall_time = 0.0;

  friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

Aggregates aggregate(const std::vector<StepRecord>& steps, double threshold, std::size_t warmup);

struct Provenance {
  std::string config_hash;  // FNV-1a 64 of the canonical config JSON, hex
  std::uint64_t seed = 0;
  std::string version;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<StepRecord> steps;
  Aggregates aggregates;
  Provenance provenance;
  bool complete = false;
  std::string error;
  /// Final knowledge base of PR/SR runs. Not part of the report files.
  std::optional<KnowledgeBase> knowledge;
};

std::string engine_version();

/// Drives the configured schema over a generated trace. Schema errors end the
/// run early with complete = false and the message in `error`.
RunReport run_experiment(const ExperimentConfig& config, const ReasoningEngine& engine);
/// Loads config.model (or the fixture) and builds the engine first.
RunReport run_experiment(const ExperimentConfig& config);

struct ReportPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
};

std::string report_csv(const RunReport& report);
std::string report_json(const RunReport& report);

/// Throws std::runtime_error naming the path that could not be written.
void emit_report(const RunReport& report, const ReportPaths& paths);

/// Parses a JSON report and checks that its aggregates match the step
/// records. Throws ConfigError.
RunReport report_from_json(const std::string& text);
RunReport load_report(const std::filesystem::path& path);

/// Schema x trace x threshold grid over a base config.
struct SweepConfig {
  ExperimentConfig base;
  std::vector<SchemaKind> schemas;
  std::vector<TraceKind> traces;
  std::vector<double> thresholds;
  std::string out = "sweep-out";
};

SweepConfig sweep_config_from_json(const std::string& text);

}  // namespace fuzzyreq
