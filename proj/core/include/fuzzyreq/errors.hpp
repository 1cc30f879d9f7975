#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyreq {

/// Malformed model, config or knowledge-base document. `where` is a JSON
/// pointer to the offending field (optionally prefixed by a file name), or
/// empty for syntax errors, whose message carries the line and column.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, std::string detail)
      : std::runtime_error(where.empty() ? detail : where + ": " + detail),
        where_(std::move(where)),
        detail_(std::move(detail)) {}

  const std::string& where() const { return where_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string where_;
  std::string detail_;
};

}  // namespace fuzzyreq
