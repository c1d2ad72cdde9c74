#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adpbound/types.hpp"

namespace adpbound {

/// Flat key=value configuration with [section] headers. Parsing keeps
/// source line numbers so every lookup or validation failure can point at
/// the offending line; serialization writes sections and keys in their
/// original order, so parse -> serialize -> parse is the identity.
struct Config {
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
    int line = 0;
  };

  std::string source_name = "<config>";
  std::vector<Section> sections;

  bool has(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;

  /// Throws with "<source>:<line>" context when missing or malformed.
  std::string get_string(const std::string& section, const std::string& key) const;
  Real get_real(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  std::vector<Real> get_reals(const std::string& section, const std::string& key) const;

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  Real get_real_or(const std::string& section, const std::string& key, Real fallback) const;
  int get_int_or(const std::string& section, const std::string& key, int fallback) const;

  /// Insert or overwrite, creating the section on demand.
  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Error pointing at the key's definition line (or the section when the
  /// key is absent).
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;
};

Config parse_config(std::istream& is, const std::string& source_name = "<config>");
Config parse_config_file(const std::string& path);
void serialize_config(std::ostream& os, const Config& config);

}  // namespace adpbound
