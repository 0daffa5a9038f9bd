#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace nlpa::cli {

// Bad flags, unknown keys or out-of-range parameters; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamEntry {
  std::string key;
  std::string value;
  std::string help;
};

// Every run parameter with its default. Values stay strings so that the
// manifest records exactly what was given; "auto" resolves per preset.
class Params {
 public:
  Params();

  const std::vector<ParamEntry>& entries() const { return entries_; }
  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;

  // Lines of the form `key = value`; '#' starts a comment.
  void load_file(const std::string& path);

  nlohmann::ordered_json to_json() const;
  static Params from_json(const nlohmann::json& j);

 private:
  const ParamEntry& entry(const std::string& key) const;
  std::vector<ParamEntry> entries_;
};

}  // namespace nlpa::cli
