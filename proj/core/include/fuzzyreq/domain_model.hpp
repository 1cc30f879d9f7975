#pragma once

// Uncertain entities (contexts, tasks, softgoals), the weighted relations
// between them, and the mobile-business-application fixture.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyreq/fuzzy_core.hpp"
#include "fuzzyreq/space.hpp"

namespace fuzzyreq {

enum class Role { context, task, softgoal };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view s);

struct UncertainEntity {
  Role role = Role::context;
  LinguisticVariable lv;
  /// Monitored value (context), configured parameter (task) or satisfaction degree (softgoal).
  double crisp = 0.0;
  std::string unit;
  /// User preference; present iff role == softgoal.
  std::optional<double> weight;

  const std::string& name() const { return lv.name(); }

  /// Throws std::invalid_argument when a role invariant is violated.
  void validate() const;
};

using Matrix = std::vector<std::vector<double>>;

enum class RelationKind { evo, sat, adp };

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> parse_relation_kind(std::string_view s);

/// Source and target roles implied by a relation kind.
std::pair<Role, Role> relation_roles(RelationKind kind);

struct WeightedRelation {
  RelationKind kind = RelationKind::evo;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  /// rows = sources, cols = targets.
  Matrix weights;
};

/// OR-decomposed tasks folded into one configuration variable. Crisp values at
/// or below `split` select the first option; above it, the second. The option-
/// local parameter is the distance from the split.
struct MergedTaskGroup {
  std::string entity;
  std::string lower_option;
  std::string upper_option;
  double split = 0.0;
};

struct DecodedOption {
  std::string option;
  double parameter = 0.0;
  bool clamped = false;
};

class Model;

DecodedOption decode_merged_task(const MergedTaskGroup& group, const Model& model, double cp);
double encode_merged_task(const MergedTaskGroup& group, std::string_view option, double parameter);

class Model {
 public:
  Model() = default;
  /// Validates entity invariants, relation shapes and role pairings, merged
  /// group supports. Throws std::invalid_argument.
  Model(std::vector<UncertainEntity> entities, std::vector<WeightedRelation> relations,
        std::vector<MergedTaskGroup> merged_groups);

  std::span<const UncertainEntity> entities() const { return entities_; }
  std::span<const WeightedRelation> relations() const { return relations_; }
  std::span<const MergedTaskGroup> merged_groups() const { return merged_groups_; }

  const UncertainEntity* find(std::string_view name) const;
  const WeightedRelation& relation(RelationKind kind) const;
  const MergedTaskGroup* merged_group(std::string_view entity) const;

  /// Entities of one role, in declaration order.
  std::vector<const UncertainEntity*> by_role(Role role) const;
  std::vector<LinguisticVariable> variables(Role role) const;
  std::vector<LinguisticVariable> variables(std::span<const std::string> names) const;
  std::vector<double> softgoal_weights() const;

 private:
  std::vector<UncertainEntity> entities_;
  std::vector<WeightedRelation> relations_;
  std::vector<MergedTaskGroup> merged_groups_;
};

SpaceBox build_space(std::span<const UncertainEntity* const> entities);
SpaceBox build_space(std::span<const LinguisticVariable> lvs);

/// Three-term partition over [lo, hi]: Low shoulder, Mid triangle peaking at
/// `peak` (default midpoint), High shoulder.
std::vector<Term> three_term_partition(Interval domain, std::optional<double> peak = std::nullopt);

/// The mobile business application: four contexts, three configuration
/// variables (merged Network/GPS locator, data size, update interval), three
/// softgoals, and the EVO/SAT/ADP weight matrices.
Model load_fixture();

}  // namespace fuzzyreq
