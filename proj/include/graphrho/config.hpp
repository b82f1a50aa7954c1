#pragma once

#include <map>
#include <optional>
#include <string>

namespace graphrho {

// Flat `key = value` configuration text, sections expressed by dotted key
// prefixes (e.g. `rho.window_w = 80`). Lines starting with '#' and blank
// lines are ignored. Later assignments win.
class KVConfig {
 public:
  KVConfig() = default;

  static KVConfig parse(const std::string& text);
  static KVConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // keys in lexicographic order; suitable for echoing resolved configs
  std::string serialize() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace graphrho
