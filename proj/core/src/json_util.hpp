#pragma once

// Helpers for strict JSON reading shared by the model, knowledge-base and
// harness readers.

#include <initializer_list>
#include <string>
#include <string_view>

#include "fuzzyreq/errors.hpp"
#include "json.hpp"

namespace fuzzyreq::detail {

using nlohmann::json;

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "... at line L, column C: ..."; keep its wording.
    throw ConfigError("", e.what());
  }
}

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok |= key == a;
    if (!ok) throw ConfigError(path + "/" + key, "unknown field");
  }
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(path + "/" + key, "missing field");
  return obj.at(key);
}

template <typename T>
T get_as(const json& v, const std::string& path) {
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

}  // namespace fuzzyreq::detail
