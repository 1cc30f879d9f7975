#include "fuzzyreq/domain_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace fuzzyreq {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::context: return "context";
    case Role::task: return "task";
    case Role::softgoal: return "softgoal";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "context") return Role::context;
  if (s == "task") return Role::task;
  if (s == "softgoal") return Role::softgoal;
  return std::nullopt;
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::evo: return "EVO";
    case RelationKind::sat: return "SAT";
    case RelationKind::adp: return "ADP";
  }
  return "?";
}

std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  if (s == "EVO" || s == "evo") return RelationKind::evo;
  if (s == "SAT" || s == "sat") return RelationKind::sat;
  if (s == "ADP" || s == "adp") return RelationKind::adp;
  return std::nullopt;
}

std::pair<Role, Role> relation_roles(RelationKind kind) {
  switch (kind) {
    case RelationKind::evo: return {Role::context, Role::softgoal};
    case RelationKind::sat: return {Role::task, Role::softgoal};
    case RelationKind::adp: return {Role::context, Role::task};
  }
  throw std::invalid_argument("unknown relation kind");
}

void UncertainEntity::validate() const {
  const auto& d = lv.domain();
  if (!d.contains(crisp)) throw std::invalid_argument("entity '" + name() + "': crisp value outside domain");
  if (role == Role::softgoal) {
    if (d.lo != 0.0 || d.hi != 1.0) throw std::invalid_argument("softgoal '" + name() + "': domain must be [0,1]");
    if (!weight || !(*weight >= 0.0) || !std::isfinite(*weight)) {
      throw std::invalid_argument("softgoal '" + name() + "': needs a nonnegative weight");
    }
  } else if (weight) {
    throw std::invalid_argument("entity '" + name() + "': only softgoals carry a weight");
  }
}

namespace {

// Largest x where mf > 0 and smallest x where mf > 0, over the vertex list.
std::pair<double, double> support(const MembershipFunction& mf) {
  const auto v = mf.vertices();
  double lo = v.back().x;
  double hi = v.front().x;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool left_pos = v[i].mu > 0.0 || (i + 1 < v.size() && v[i + 1].mu > 0.0);
    const bool right_pos = v[i].mu > 0.0 || (i > 0 && v[i - 1].mu > 0.0);
    if (left_pos) lo = std::min(lo, v[i].x);
    if (right_pos) hi = std::max(hi, v[i].x);
  }
  return {lo, hi};
}

}  // namespace

Model::Model(std::vector<UncertainEntity> entities, std::vector<WeightedRelation> relations,
             std::vector<MergedTaskGroup> merged_groups)
    : entities_(std::move(entities)), relations_(std::move(relations)), merged_groups_(std::move(merged_groups)) {
  std::unordered_set<std::string> names;
  for (const auto& e : entities_) {
    e.validate();
    if (!names.insert(e.name()).second) throw std::invalid_argument("duplicate entity '" + e.name() + "'");
  }

  std::unordered_set<int> kinds;
  for (const auto& r : relations_) {
    if (!kinds.insert(static_cast<int>(r.kind)).second) {
      throw std::invalid_argument("duplicate relation " + std::string(to_string(r.kind)));
    }
    const auto [src_role, dst_role] = relation_roles(r.kind);
    const std::string tag(to_string(r.kind));
    if (r.sources.empty() || r.targets.empty()) throw std::invalid_argument(tag + ": empty source or target list");
    for (const auto& s : r.sources) {
      const auto* e = find(s);
      if (!e) throw std::invalid_argument(tag + ": unknown source '" + s + "'");
      if (e->role != src_role) throw std::invalid_argument(tag + ": source '" + s + "' has the wrong role");
    }
    for (const auto& t : r.targets) {
      const auto* e = find(t);
      if (!e) throw std::invalid_argument(tag + ": unknown target '" + t + "'");
      if (e->role != dst_role) throw std::invalid_argument(tag + ": target '" + t + "' has the wrong role");
    }
    if (r.weights.size() != r.sources.size()) throw std::invalid_argument(tag + ": weight rows != source count");
    for (const auto& row : r.weights) {
      if (row.size() != r.targets.size()) throw std::invalid_argument(tag + ": weight cols != target count");
      for (double w : row) {
        if (!std::isfinite(w)) throw std::invalid_argument(tag + ": non-finite weight");
      }
    }
  }

  for (const auto& g : merged_groups_) {
    const auto* e = find(g.entity);
    if (!e || e->role != Role::task) throw std::invalid_argument("merged group: '" + g.entity + "' is not a task");
    const auto lo = e->lv.term_index(g.lower_option);
    const auto hi = e->lv.term_index(g.upper_option);
    if (!lo || !hi || *lo == *hi) throw std::invalid_argument("merged group '" + g.entity + "': unknown options");
    if (!e->lv.domain().contains(g.split)) throw std::invalid_argument("merged group '" + g.entity + "': split outside domain");
    if (support(e->lv.term(*lo).mf).second > g.split || support(e->lv.term(*hi).mf).first < g.split) {
      throw std::invalid_argument("merged group '" + g.entity + "': option supports overlap the split");
    }
  }
}

const UncertainEntity* Model::find(std::string_view name) const {
  for (const auto& e : entities_) {
    if (e.name() == name) return &e;
  }
  return nullptr;
}

const WeightedRelation& Model::relation(RelationKind kind) const {
  for (const auto& r : relations_) {
    if (r.kind == kind) return r;
  }
  throw std::out_of_range("model has no " + std::string(to_string(kind)) + " relation");
}

const MergedTaskGroup* Model::merged_group(std::string_view entity) const {
  for (const auto& g : merged_groups_) {
    if (g.entity == entity) return &g;
  }
  return nullptr;
}

std::vector<const UncertainEntity*> Model::by_role(Role role) const {
  std::vector<const UncertainEntity*> out;
  for (const auto& e : entities_) {
    if (e.role == role) out.push_back(&e);
  }
  return out;
}

std::vector<LinguisticVariable> Model::variables(Role role) const {
  std::vector<LinguisticVariable> out;
  for (const auto* e : by_role(role)) out.push_back(e->lv);
  return out;
}

std::vector<LinguisticVariable> Model::variables(std::span<const std::string> names) const {
  std::vector<LinguisticVariable> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    const auto* e = find(n);
    if (!e) throw std::invalid_argument("unknown entity '" + n + "'");
    out.push_back(e->lv);
  }
  return out;
}

std::vector<double> Model::softgoal_weights() const {
  std::vector<double> w;
  for (const auto* e : by_role(Role::softgoal)) w.push_back(*e->weight);
  return w;
}

DecodedOption decode_merged_task(const MergedTaskGroup& group, const Model& model, double cp) {
  const auto* e = model.find(group.entity);
  if (!e) throw std::invalid_argument("decode_merged_task: unknown entity '" + group.entity + "'");
  DecodedOption out;
  const double c = e->lv.domain().clamp(cp);
  out.clamped = c != cp;
  if (c <= group.split) {
    out.option = group.lower_option;
    out.parameter = group.split - c;
  } else {
    out.option = group.upper_option;
    out.parameter = c - group.split;
  }
  return out;
}

double encode_merged_task(const MergedTaskGroup& group, std::string_view option, double parameter) {
  if (option == group.lower_option) return group.split - parameter;
  if (option == group.upper_option) return group.split + parameter;
  throw std::invalid_argument("encode_merged_task: unknown option '" + std::string(option) + "'");
}

SpaceBox build_space(std::span<const UncertainEntity* const> entities) {
  std::vector<Interval> dims;
  dims.reserve(entities.size());
  for (const auto* e : entities) dims.push_back(e->lv.domain());
  return SpaceBox(std::move(dims));
}

SpaceBox build_space(std::span<const LinguisticVariable> lvs) {
  std::vector<Interval> dims;
  dims.reserve(lvs.size());
  for (const auto& lv : lvs) dims.push_back(lv.domain());
  return SpaceBox(std::move(dims));
}

std::vector<Term> three_term_partition(Interval domain, std::optional<double> peak) {
  const double p = peak.value_or(domain.mid());
  return {
      {"Low", MembershipFunction::triangle(domain.lo, domain.lo, p)},
      {"Mid", MembershipFunction::triangle(domain.lo, p, domain.hi)},
      {"High", MembershipFunction::triangle(p, domain.hi, domain.hi)},
  };
}

Model load_fixture() {
  auto context = [](std::string name, Interval d, double crisp, std::string unit) {
    return UncertainEntity{Role::context, LinguisticVariable(std::move(name), d, three_term_partition(d)), crisp,
                           std::move(unit), std::nullopt};
  };
  auto task = [](std::string name, Interval d, double crisp, std::string unit) {
    return UncertainEntity{Role::task, LinguisticVariable(std::move(name), d, three_term_partition(d)), crisp,
                           std::move(unit), std::nullopt};
  };
  auto softgoal = [](std::string name) {
    const Interval d{0.0, 1.0};
    return UncertainEntity{Role::softgoal, LinguisticVariable(std::move(name), d, three_term_partition(d)), 0.5, "",
                           1.0};
  };

  std::vector<UncertainEntity> entities;
  entities.push_back(context("bandwidth", {300.0, 500.0}, 380.0, "kbps"));
  entities.push_back(context("delay", {0.0, 200.0}, 100.0, "ms"));
  entities.push_back(context("energy", {0.0, 100.0}, 60.0, "%"));
  entities.push_back(context("memory", {0.0, 512.0}, 256.0, "MB"));

  entities.push_back(UncertainEntity{
      Role::task,
      LinguisticVariable("locator", {-30.0, 30.0},
                         {{"Network", MembershipFunction::triangle(-30.0, -15.0, 0.0)},
                          {"GPS", MembershipFunction::triangle(0.0, 15.0, 30.0)}}),
      15.0, "s", std::nullopt});
  entities.push_back(task("data_size", {0.0, 100.0}, 50.0, "MB"));
  entities.push_back(task("interval", {0.0, 60.0}, 30.0, "s"));

  entities.push_back(softgoal("time_efficiency"));
  entities.push_back(softgoal("energy_efficiency"));
  entities.push_back(softgoal("information_efficiency"));

  const std::vector<std::string> contexts{"bandwidth", "delay", "energy", "memory"};
  const std::vector<std::string> tasks{"locator", "data_size", "interval"};
  const std::vector<std::string> softgoals{"time_efficiency", "energy_efficiency", "information_efficiency"};

  std::vector<WeightedRelation> relations;
  relations.push_back({RelationKind::evo, contexts, softgoals,
                       {{5, 1, 3}, {-1, -3, -1}, {2, -4, 1}, {2, -1, 2}}});
  relations.push_back({RelationKind::sat, tasks, softgoals,
                       {{-1, -3, 1}, {-1, -1, 4}, {4, 2, -1}}});
  relations.push_back({RelationKind::adp, contexts, tasks,
                       {{-3, 2, -1}, {1, -3, 1}, {2, 1, -3}, {0, 1, 1}}});

  std::vector<MergedTaskGroup> groups{{"locator", "Network", "GPS", 0.0}};
  return Model(std::move(entities), std::move(relations), std::move(groups));
}

}  // namespace fuzzyreq
