#pragma once

// The four adaptation schemas over a model:
//   forward (FR)   - Mamdani ADP reasoning, no optimization
//   backward (BR)  - GA search of Space_config minimizing the satisfaction deviation
//   parameter-identified (PR) - FR with learned membership functions, BR plus
//                    a GA over membership-function parameters when FR misses
//   system-identified (SR)    - T-S reasoning with FCM clusters and trained
//                    affine consequents, BR plus retraining when it misses

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fuzzyreq/domain_model.hpp"
#include "fuzzyreq/fuzzy_core.hpp"
#include "fuzzyreq/genetic.hpp"
#include "fuzzyreq/knowledge_base.hpp"
#include "fuzzyreq/learning.hpp"

namespace fuzzyreq {

/// (sum_i (d_i - a_i)^2 * w_i) / sum_i w_i. Throws std::invalid_argument on
/// mismatched lengths, negative weights or all-zero weights.
double weighted_deviation(std::span<const double> desired, std::span<const double> actual,
                          std::span<const double> weights);

enum class Mode { naive, optimized, reused, learned };

std::string_view to_string(Mode mode);

enum DecisionFlag : unsigned {
  kInputClamped = 1u << 0,
  kInferenceDefaulted = 1u << 1,
  kClusterGuard = 1u << 2,
  kCentersCollapsed = 1u << 3,
  kClusterDefaulted = 1u << 4,
};

struct AdaptationDecision {
  std::vector<double> cp;
  std::vector<double> sd_desired;
  std::vector<double> sd_actual;
  double deviation = 0.0;
  Mode mode = Mode::naive;
  double wall_time = 0.0;
  unsigned flags = 0;
};

struct Satisfaction {
  std::vector<double> values;
  bool defaulted = false;
};

/// Generated rule sets and variable lists for a model. Immutable, so one engine
/// can serve any number of concurrent schema runs.
class ReasoningEngine {
 public:
  /// Requires EVO, SAT and ADP relations whose source and target lists are the
  /// full role lists in declaration order. Throws std::invalid_argument.
  explicit ReasoningEngine(Model model);

  const Model& model() const { return model_; }
  const SpaceBox& context_space() const { return context_space_; }
  const SpaceBox& config_space() const { return config_space_; }
  const MFSet& prior() const { return prior_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const MamdaniRule> rules(RelationKind kind) const;

  std::vector<double> desired_satisfaction(std::span<const double> mv) const;
  Satisfaction actual_satisfaction(std::span<const double> cp) const;

  /// Mamdani ADP reasoning under the given context/task membership functions.
  InferenceResult configure(std::span<const double> mv, const MFSet& mfs) const;

  /// Deviation of actual_satisfaction(cp) from `desired`; +infinity when the
  /// SAT reasoning fired no rule for some softgoal.
  double config_deviation(std::span<const double> desired, std::span<const double> cp) const;

  AdaptationDecision forward_reason(std::span<const double> mv) const;
  AdaptationDecision forward_reason(std::span<const double> mv, const MFSet& mfs) const;
  /// T-S ADP reasoning over normalized contexts and configurations.
  AdaptationDecision forward_reason(std::span<const double> mv, const TSRuleBase& base) const;
  AdaptationDecision backward_reason(std::span<const double> mv, const GASettings& ga) const;

 private:
  AdaptationDecision finish(std::vector<double> sd_desired, std::vector<double> cp, Mode mode, unsigned flags) const;

  Model model_;
  SpaceBox context_space_;
  SpaceBox config_space_;
  MFSet prior_;
  std::vector<LinguisticVariable> softgoals_;
  std::vector<double> weights_;
  std::vector<MamdaniRule> evo_;
  std::vector<MamdaniRule> sat_;
  std::vector<MamdaniRule> adp_;
};

/// Free membership-function parameters of an MF set: every vertex strictly
/// inside its variable's domain, except split points of merged task groups.
/// Each parameter is bounded by the domain, or by its option's side of the
/// split for merged groups.
class MFParameterization {
 public:
  MFParameterization(const MFSet& base, const Model& model);

  std::size_t size() const { return slots_.size(); }
  const SpaceBox& box() const { return box_; }
  std::vector<double> encode(const MFSet& mfs) const;

  /// Writes the parameters back, then repairs each term so its vertices stay
  /// sorted and strictly increasing inside the bounds.
  MFSet apply(std::span<const double> params) const;

 private:
  struct Slot {
    std::size_t variable;  // contexts first, then tasks
    std::size_t term;
    std::size_t vertex;
  };
  MFSet base_;
  std::vector<Slot> slots_;
  std::vector<Interval> term_bounds_;  // per (variable, term), flattened
  std::vector<std::size_t> term_offset_;
  SpaceBox box_;
};

struct PRSettings {
  GASettings ga;     // configuration search
  GASettings mf_ga;  // membership-function search
};

/// One parameter-identified step. Reuses the nearest learned MF set when FR
/// with it meets the threshold (knowledge base untouched); otherwise runs BR,
/// learns an MF set for mv and appends it.
AdaptationDecision pr_step(const ReasoningEngine& engine, std::span<const double> mv, double threshold,
                           KnowledgeBase& kb, const PRSettings& settings);

struct SRSettings {
  std::size_t warmup = 50;  // T
  GASettings ga;
  TrainerSettings trainer;
  FCMSettings fcm;
};

struct SRState {
  KnowledgeBase kb;
  /// (context, configuration) pairs from every BR step, raw units.
  std::vector<Sample> samples;
};

SRState make_sr_state(const ReasoningEngine& engine);
KnowledgeBase make_pr_knowledge(const ReasoningEngine& engine);

/// Cluster count for a retrain at `time`: max(2, time mod T), capped at the
/// sample count. Sets `guarded` when the guard or the cap changed the value.
std::size_t sr_cluster_count(std::size_t time, std::size_t warmup, std::size_t samples, bool& guarded);

/// Re-cluster all samples and retrain the T-S consequents, replacing the
/// knowledge base entries. Returns the training result (normalized space).
TrainingResult sr_retrain(const ReasoningEngine& engine, SRState& state, std::size_t k, const SRSettings& settings,
                          unsigned& flags);

/// One system-identified step at 1-based `time`.
AdaptationDecision sr_step(const ReasoningEngine& engine, std::span<const double> mv, double threshold,
                           SRState& state, std::size_t time, const SRSettings& settings);

}  // namespace fuzzyreq
