#pragma once

#include <map>
#include <string>
#include <vector>

namespace fusemot {

// Flat `key = value` runtime configuration. Unknown keys are rejected;
// every key has a documented default. Precedence: CLI --set > file > default.
class Config {
 public:
  Config();

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);  // throws on unknown key
  void apply_override(const std::string& key_eq_value);        // "key=value"

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;

  struct Entry {
    std::string value;
    std::string doc;
  };
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace fusemot
