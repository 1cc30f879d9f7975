#include "fuzzyreq/knowledge_base.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"

namespace fuzzyreq {

using detail::get_as;
using detail::get_number;
using detail::json;
using detail::reject_unknown;
using detail::require;

std::string_view to_string(KnowledgeKind kind) {
  return kind == KnowledgeKind::mf_sets ? "mf_sets" : "ts_model";
}

KnowledgeBase::KnowledgeBase(KnowledgeKind kind, MFSet prior, SpaceBox context_space, SpaceBox config_space)
    : kind_(kind),
      prior_(std::move(prior)),
      context_space_(std::move(context_space)),
      config_space_(std::move(config_space)) {}

std::optional<std::size_t> KnowledgeBase::find_nearest(std::span<const double> mv) const {
  if (entries_.empty()) return std::nullopt;
  const auto q = context_space_.normalize(mv);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto k = context_space_.normalize(entries_[i].key);
    double d = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) d += (k[j] - q[j]) * (k[j] - q[j]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

const MFSet& KnowledgeBase::nearest_mfs(std::span<const double> mv) const {
  if (kind_ != KnowledgeKind::mf_sets) throw std::logic_error("nearest_mfs on a ts_model knowledge base");
  const auto i = find_nearest(mv);
  return i ? std::get<MFSet>(entries_[*i].payload) : prior_;
}

void KnowledgeBase::check(const KnowledgeEntry& e) const {
  if (e.key.size() != context_space_.size()) throw std::invalid_argument("knowledge entry key has the wrong dimension");
  for (double v : e.key) {
    if (!std::isfinite(v)) throw std::invalid_argument("knowledge entry key is not finite");
  }
  const bool is_mf = std::holds_alternative<MFSet>(e.payload);
  if (is_mf != (kind_ == KnowledgeKind::mf_sets)) throw std::invalid_argument("knowledge entry payload kind mismatch");
}

void KnowledgeBase::append(KnowledgeEntry entry) {
  check(entry);
  entries_.push_back(std::move(entry));
}

void KnowledgeBase::replace_entries(std::vector<KnowledgeEntry> entries) {
  for (const auto& e : entries) check(e);
  entries_ = std::move(entries);
}

TSRuleBase KnowledgeBase::ts_rule_base(double fuzzifier) const {
  if (kind_ != KnowledgeKind::ts_model) throw std::logic_error("ts_rule_base on an mf_sets knowledge base");
  TSRuleBase base;
  base.antecedent = TSAntecedent::fcm;
  base.fuzzifier = fuzzifier;
  for (const auto& e : entries_) {
    const auto& p = std::get<TSPayload>(e.payload);
    base.rules.push_back({p.center, p.coefficients});
  }
  return base;
}

namespace {

json space_to_json(const SpaceBox& box) {
  json a = json::array();
  for (const auto& d : box.dims()) a.push_back({d.lo, d.hi});
  return a;
}

SpaceBox space_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of [lo, hi]");
  std::vector<Interval> dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 2) throw ConfigError(p, "expected [lo, hi]");
    dims.push_back({get_number(j[i][0], p + "/0"), get_number(j[i][1], p + "/1")});
  }
  try {
    return SpaceBox(std::move(dims));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

json lv_to_json(const LinguisticVariable& lv) {
  json terms = json::array();
  for (const auto& t : lv.terms()) {
    json vs = json::array();
    for (const auto& v : t.mf.vertices()) vs.push_back({v.x, v.mu});
    terms.push_back({{"label", t.label}, {"vertices", vs}});
  }
  return {{"name", lv.name()}, {"domain", {lv.domain().lo, lv.domain().hi}}, {"terms", terms}};
}

LinguisticVariable lv_from_json(const json& j, const std::string& path) {
  reject_unknown(j, path, {"name", "domain", "terms"});
  const auto& d = require(j, path, "domain");
  if (!d.is_array() || d.size() != 2) throw ConfigError(path + "/domain", "expected [lo, hi]");
  const Interval dom{get_number(d[0], path + "/domain/0"), get_number(d[1], path + "/domain/1")};
  std::vector<Term> terms;
  const auto& ts = require(j, path, "terms");
  if (!ts.is_array()) throw ConfigError(path + "/terms", "expected an array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto tp = path + "/terms/" + std::to_string(i);
    reject_unknown(ts[i], tp, {"label", "vertices"});
    std::vector<Vertex> vs;
    const auto& vj = require(ts[i], tp, "vertices");
    if (!vj.is_array()) throw ConfigError(tp + "/vertices", "expected an array");
    for (std::size_t k = 0; k < vj.size(); ++k) {
      const auto vp = tp + "/vertices/" + std::to_string(k);
      if (!vj[k].is_array() || vj[k].size() != 2) throw ConfigError(vp, "expected [x, mu]");
      vs.push_back({get_number(vj[k][0], vp + "/0"), get_number(vj[k][1], vp + "/1")});
    }
    try {
      terms.push_back({get_as<std::string>(require(ts[i], tp, "label"), tp + "/label"), MembershipFunction(std::move(vs))});
    } catch (const std::invalid_argument& e) {
      throw ConfigError(tp, e.what());
    }
  }
  try {
    return LinguisticVariable(get_as<std::string>(require(j, path, "name"), path + "/name"), dom, std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

json mfs_to_json(const MFSet& s) {
  json c = json::array();
  json t = json::array();
  for (const auto& lv : s.contexts) c.push_back(lv_to_json(lv));
  for (const auto& lv : s.tasks) t.push_back(lv_to_json(lv));
  return {{"contexts", c}, {"tasks", t}};
}

MFSet mfs_from_json(const json& j, const std::string& path) {
  reject_unknown(j, path, {"contexts", "tasks"});
  MFSet s;
  const auto& c = require(j, path, "contexts");
  const auto& t = require(j, path, "tasks");
  if (!c.is_array() || !t.is_array()) throw ConfigError(path, "contexts and tasks must be arrays");
  for (std::size_t i = 0; i < c.size(); ++i) s.contexts.push_back(lv_from_json(c[i], path + "/contexts/" + std::to_string(i)));
  for (std::size_t i = 0; i < t.size(); ++i) s.tasks.push_back(lv_from_json(t[i], path + "/tasks/" + std::to_string(i)));
  return s;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_number(j[i], path + "/" + std::to_string(i)));
  return v;
}

}  // namespace

std::string KnowledgeBase::to_json() const {
  json root;
  root["kind"] = std::string(fuzzyreq::to_string(kind_));
  root["context_space"] = space_to_json(context_space_);
  root["config_space"] = space_to_json(config_space_);
  root["prior_mfs"] = mfs_to_json(prior_);
  root["entries"] = json::array();
  for (const auto& e : entries_) {
    json p;
    if (const auto* mfs = std::get_if<MFSet>(&e.payload)) {
      p = mfs_to_json(*mfs);
    } else {
      const auto& ts = std::get<TSPayload>(e.payload);
      p = {{"center", ts.center}, {"coefficients", ts.coefficients}};
    }
    root["entries"].push_back({{"key", e.key}, {"payload", p}});
  }
  return root.dump(1);
}

KnowledgeBase KnowledgeBase::from_json(const std::string& text) {
  const json root = detail::parse_json(text);
  reject_unknown(root, "", {"kind", "context_space", "config_space", "prior_mfs", "entries"});
  const auto kind_s = get_as<std::string>(require(root, "", "kind"), "/kind");
  KnowledgeKind kind;
  if (kind_s == "mf_sets") {
    kind = KnowledgeKind::mf_sets;
  } else if (kind_s == "ts_model") {
    kind = KnowledgeKind::ts_model;
  } else {
    throw ConfigError("/kind", "unknown knowledge kind '" + kind_s + "'");
  }
  KnowledgeBase kb(kind, mfs_from_json(require(root, "", "prior_mfs"), "/prior_mfs"),
                   space_from_json(require(root, "", "context_space"), "/context_space"),
                   space_from_json(require(root, "", "config_space"), "/config_space"));
  const auto& entries = require(root, "", "entries");
  if (!entries.is_array()) throw ConfigError("/entries", "expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto ep = "/entries/" + std::to_string(i);
    reject_unknown(entries[i], ep, {"key", "payload"});
    KnowledgeEntry e;
    e.key = numbers(require(entries[i], ep, "key"), ep + "/key");
    const auto& p = require(entries[i], ep, "payload");
    if (kind == KnowledgeKind::mf_sets) {
      e.payload = mfs_from_json(p, ep + "/payload");
    } else {
      reject_unknown(p, ep + "/payload", {"center", "coefficients"});
      TSPayload ts;
      ts.center = numbers(require(p, ep + "/payload", "center"), ep + "/payload/center");
      const auto& rows = require(p, ep + "/payload", "coefficients");
      if (!rows.is_array()) throw ConfigError(ep + "/payload/coefficients", "expected a matrix");
      for (std::size_t r = 0; r < rows.size(); ++r) {
        ts.coefficients.push_back(numbers(rows[r], ep + "/payload/coefficients/" + std::to_string(r)));
      }
      e.payload = std::move(ts);
    }
    try {
      kb.append(std::move(e));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ep, ex.what());
    }
  }
  return kb;
}

void KnowledgeBase::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write knowledge base: " + path.string());
  out << to_json() << '\n';
  if (!out) throw std::runtime_error("cannot write knowledge base: " + path.string());
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open knowledge base");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return from_json(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + (e.where().empty() ? "" : ":" + e.where()), e.detail());
  }
}

}  // namespace fuzzyreq
