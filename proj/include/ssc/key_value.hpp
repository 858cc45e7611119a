#pragma once

// Canonical "key = value" text used by configuration files and the config
// block embedded in checkpoints. '#' starts a comment; blank lines are
// ignored; keys are unique.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ssc {

class KeyValues {
 public:
  // Throws ConfigError on malformed lines or duplicate keys.
  static KeyValues parse(const std::string& text);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }

  // Each take_* removes the key when present and leaves `out` untouched otherwise.
  void take(const std::string& key, std::string& out);
  void take(const std::string& key, double& out);
  void take(const std::string& key, std::size_t& out);
  void take_u64(const std::string& key, std::uint64_t& out);
  void take(const std::string& key, bool& out);
  void take(const std::string& key, std::vector<std::size_t>& out);

  // Throws ConfigError naming the first key nobody consumed.
  void expect_empty() const;

 private:
  struct Value {
    std::string text;
    std::size_t line;
  };
  const Value* find(const std::string& key) const;
  std::map<std::string, Value> values_;
};

// Formatting helpers for canonical output; doubles round-trip exactly.
std::string format_double(double v);
std::string format_list(const std::vector<std::size_t>& v);

}  // namespace ssc
