#pragma once

// Learned adaptation knowledge keyed by context vector. A knowledge base holds
// one payload kind: membership-function sets (parameter-identified schema) or
// T-S clusters with coefficient rows (system-identified schema).

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fuzzyreq/fuzzy_core.hpp"
#include "fuzzyreq/space.hpp"

namespace fuzzyreq {

/// Membership functions of the contexts and tasks, i.e. the parameters of the
/// ADP reasoning that the parameter-identified schema learns.
struct MFSet {
  std::vector<LinguisticVariable> contexts;
  std::vector<LinguisticVariable> tasks;

  friend bool operator==(const MFSet&, const MFSet&) = default;
};

/// One T-S cluster in normalized context/config space.
struct TSPayload {
  std::vector<double> center;
  std::vector<std::vector<double>> coefficients;  // [output][a0..am]

  friend bool operator==(const TSPayload&, const TSPayload&) = default;
};

struct KnowledgeEntry {
  std::vector<double> key;  // context vector, raw units
  std::variant<MFSet, TSPayload> payload;

  friend bool operator==(const KnowledgeEntry&, const KnowledgeEntry&) = default;
};

enum class KnowledgeKind { mf_sets, ts_model };

std::string_view to_string(KnowledgeKind kind);

class KnowledgeBase {
 public:
  KnowledgeBase(KnowledgeKind kind, MFSet prior, SpaceBox context_space, SpaceBox config_space);

  KnowledgeKind kind() const { return kind_; }
  const MFSet& prior() const { return prior_; }
  std::span<const KnowledgeEntry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const SpaceBox& context_space() const { return context_space_; }
  const SpaceBox& config_space() const { return config_space_; }

  /// Index of the entry whose key is nearest to mv in range-normalized
  /// Euclidean distance; ties go to the earliest entry. nullopt when empty.
  std::optional<std::size_t> find_nearest(std::span<const double> mv) const;

  /// MF set of the nearest entry, or the prior when there is none.
  const MFSet& nearest_mfs(std::span<const double> mv) const;

  /// Throws std::invalid_argument on a payload of the wrong kind or a key of
  /// the wrong dimension.
  void append(KnowledgeEntry entry);
  void replace_entries(std::vector<KnowledgeEntry> entries);

  /// Rule base over normalized contexts for a ts_model knowledge base.
  TSRuleBase ts_rule_base(double fuzzifier = 2.0) const;

  /// {kind, context_space, config_space, prior_mfs, entries: [{key, payload}]}.
  /// Doubles are written in shortest round-trip form, so load(save(kb)) == kb.
  std::string to_json() const;
  static KnowledgeBase from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static KnowledgeBase load(const std::filesystem::path& path);

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;

 private:
  void check(const KnowledgeEntry& e) const;

  KnowledgeKind kind_;
  MFSet prior_;
  SpaceBox context_space_;
  SpaceBox config_space_;
  std::vector<KnowledgeEntry> entries_;
};

}  // namespace fuzzyreq
