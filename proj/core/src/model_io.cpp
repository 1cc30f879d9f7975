#include "fuzzyreq/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace fuzzyreq {

using detail::get_as;
using detail::get_number;
using detail::json;
using detail::reject_unknown;
using detail::require;

namespace {

Interval parse_interval(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [lo, hi]");
  return {get_number(j[0], path + "/0"), get_number(j[1], path + "/1")};
}

MembershipFunction parse_mf(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of [x, mu] pairs");
  std::vector<Vertex> vs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 2) throw ConfigError(p, "expected [x, mu]");
    vs.push_back({get_number(j[i][0], p + "/0"), get_number(j[i][1], p + "/1")});
  }
  try {
    return MembershipFunction(std::move(vs));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

UncertainEntity parse_entity(const json& j, const std::string& path) {
  reject_unknown(j, path, {"name", "role", "unit", "crisp", "domain", "weight", "terms"});
  const auto name = get_as<std::string>(require(j, path, "name"), path + "/name");
  const auto role_s = get_as<std::string>(require(j, path, "role"), path + "/role");
  const auto role = parse_role(role_s);
  if (!role) throw ConfigError(path + "/role", "unknown role '" + role_s + "'");
  const auto domain = parse_interval(require(j, path, "domain"), path + "/domain");

  const auto& terms_j = require(j, path, "terms");
  if (!terms_j.is_array()) throw ConfigError(path + "/terms", "expected an array");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < terms_j.size(); ++i) {
    const auto tp = path + "/terms/" + std::to_string(i);
    reject_unknown(terms_j[i], tp, {"label", "vertices"});
    terms.push_back({get_as<std::string>(require(terms_j[i], tp, "label"), tp + "/label"),
                     parse_mf(require(terms_j[i], tp, "vertices"), tp + "/vertices")});
  }

  std::optional<double> weight;
  if (j.contains("weight")) weight = get_number(j.at("weight"), path + "/weight");
  std::string unit = j.contains("unit") ? get_as<std::string>(j.at("unit"), path + "/unit") : "";

  try {
    LinguisticVariable lv(name, domain, std::move(terms));
    const double crisp = j.contains("crisp") ? get_number(j.at("crisp"), path + "/crisp") : domain.mid();
    UncertainEntity e{*role, std::move(lv), crisp, std::move(unit), weight};
    e.validate();
    return e;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

WeightedRelation parse_relation(const json& j, const std::string& path) {
  reject_unknown(j, path, {"kind", "sources", "targets", "weights"});
  const auto kind_s = get_as<std::string>(require(j, path, "kind"), path + "/kind");
  const auto kind = parse_relation_kind(kind_s);
  if (!kind) throw ConfigError(path + "/kind", "unknown relation kind '" + kind_s + "'");
  WeightedRelation r;
  r.kind = *kind;
  r.sources = get_as<std::vector<std::string>>(require(j, path, "sources"), path + "/sources");
  r.targets = get_as<std::vector<std::string>>(require(j, path, "targets"), path + "/targets");
  const auto& w = require(j, path, "weights");
  if (!w.is_array()) throw ConfigError(path + "/weights", "expected a matrix");
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto rp = path + "/weights/" + std::to_string(i);
    if (!w[i].is_array()) throw ConfigError(rp, "expected a row");
    std::vector<double> row;
    for (std::size_t c = 0; c < w[i].size(); ++c) row.push_back(get_number(w[i][c], rp + "/" + std::to_string(c)));
    r.weights.push_back(std::move(row));
  }
  return r;
}

MergedTaskGroup parse_group(const json& j, const std::string& path) {
  reject_unknown(j, path, {"entity", "lower_option", "upper_option", "split"});
  return {get_as<std::string>(require(j, path, "entity"), path + "/entity"),
          get_as<std::string>(require(j, path, "lower_option"), path + "/lower_option"),
          get_as<std::string>(require(j, path, "upper_option"), path + "/upper_option"),
          j.contains("split") ? get_number(j.at("split"), path + "/split") : 0.0};
}

}  // namespace

Model model_from_json(const std::string& text) {
  const json root = detail::parse_json(text);
  reject_unknown(root, "", {"entities", "relations", "merged_groups"});

  std::vector<UncertainEntity> entities;
  const auto& ents = require(root, "", "entities");
  if (!ents.is_array()) throw ConfigError("/entities", "expected an array");
  for (std::size_t i = 0; i < ents.size(); ++i) entities.push_back(parse_entity(ents[i], "/entities/" + std::to_string(i)));

  std::vector<WeightedRelation> relations;
  const auto& rels = require(root, "", "relations");
  if (!rels.is_array()) throw ConfigError("/relations", "expected an array");
  for (std::size_t i = 0; i < rels.size(); ++i) relations.push_back(parse_relation(rels[i], "/relations/" + std::to_string(i)));

  std::vector<MergedTaskGroup> groups;
  if (root.contains("merged_groups")) {
    const auto& gs = root.at("merged_groups");
    if (!gs.is_array()) throw ConfigError("/merged_groups", "expected an array");
    for (std::size_t i = 0; i < gs.size(); ++i) groups.push_back(parse_group(gs[i], "/merged_groups/" + std::to_string(i)));
  }

  try {
    return Model(std::move(entities), std::move(relations), std::move(groups));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/", e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError("/", e.what());
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open model file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return model_from_json(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + (e.where().empty() ? "" : ":" + e.where()), e.detail());
  }
}

std::string model_to_json(const Model& model) {
  json root;
  root["entities"] = json::array();
  for (const auto& e : model.entities()) {
    json je;
    je["name"] = e.name();
    je["role"] = std::string(to_string(e.role));
    if (!e.unit.empty()) je["unit"] = e.unit;
    je["crisp"] = e.crisp;
    je["domain"] = {e.lv.domain().lo, e.lv.domain().hi};
    if (e.weight) je["weight"] = *e.weight;
    json terms = json::array();
    for (const auto& t : e.lv.terms()) {
      json vs = json::array();
      for (const auto& v : t.mf.vertices()) vs.push_back({v.x, v.mu});
      terms.push_back({{"label", t.label}, {"vertices", vs}});
    }
    je["terms"] = terms;
    root["entities"].push_back(je);
  }
  root["relations"] = json::array();
  for (const auto& r : model.relations()) {
    root["relations"].push_back({{"kind", std::string(to_string(r.kind))},
                                 {"sources", r.sources},
                                 {"targets", r.targets},
                                 {"weights", r.weights}});
  }
  root["merged_groups"] = json::array();
  for (const auto& g : model.merged_groups()) {
    root["merged_groups"].push_back(
        {{"entity", g.entity}, {"lower_option", g.lower_option}, {"upper_option", g.upper_option}, {"split", g.split}});
  }
  return root.dump(2);
}

}  // namespace fuzzyreq
