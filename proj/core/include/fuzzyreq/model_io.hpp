#pragma once

#include <filesystem>
#include <string>

#include "fuzzyreq/domain_model.hpp"

namespace fuzzyreq {

/// Parses a model document:
///
///   { "entities": [ { "name", "role", "unit", "crisp", "domain": [lo, hi],
///                     "weight" (softgoals only),
///                     "terms": [ { "label", "vertices": [[x, mu], ...] } ] } ],
///     "relations": [ { "kind": "EVO|SAT|ADP", "sources": [...],
///                      "targets": [...], "weights": [[...], ...] } ],
///     "merged_groups": [ { "entity", "lower_option", "upper_option", "split" } ] }
///
/// Unknown fields are rejected. Throws ConfigError.
Model model_from_json(const std::string& text);
Model load_model(const std::filesystem::path& path);

std::string model_to_json(const Model& model);

}  // namespace fuzzyreq
