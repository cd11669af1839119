#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hhsim {

enum class ValueType { real, integer, boolean, text, real_list };

struct ConfigKey {
  std::string_view name;  // "section.key"
  ValueType type;
  std::string_view default_value;  // empty: unset
  std::string_view doc;
};

// All recognised keys in the order they are written.
const std::vector<ConfigKey>& config_schema();

/// Parsed run configuration.
///
/// Dialect: `[section]` headers followed by `key = value` lines; `#` or `;` start a
/// comment line; blank lines are ignored; lists are comma separated; booleans are
/// true/false. A key may appear once. Unknown sections or keys are errors.
class RunConfig {
 public:
  RunConfig();  // every key at its default

  static RunConfig parse(std::string_view text, std::string_view origin = "config");
  static RunConfig load_file(const std::string& path);

  // `section.key = value` override, validated like a file entry.
  void set(std::string_view name, std::string_view value);
  void unset(std::string_view name);

  bool has(std::string_view name) const;
  double real(std::string_view name) const;
  std::optional<double> optional_real(std::string_view name) const;
  long long integer(std::string_view name) const;
  bool boolean(std::string_view name) const;
  std::string text(std::string_view name) const;
  std::vector<double> real_list(std::string_view name) const;

  // Every key, grouped by section, in schema order. parse(serialize()) reproduces the config.
  std::string serialize() const;
  // ("section.key", value) for every key, unset ones with an empty value.
  std::vector<std::pair<std::string, std::string>> entries() const;

  bool operator==(const RunConfig& other) const { return values_ == other.values_; }

 private:
  const std::string& raw(std::string_view name) const;
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace hhsim
