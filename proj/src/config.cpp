#include "adpbound/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adpbound {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void raise(const std::string& source, int line, const std::string& message) {
  std::ostringstream os;
  os << source << ":" << line << ": " << message;
  throw std::runtime_error(os.str());
}

}  // namespace

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  for (const Section& s : sections) {
    if (s.name != section) continue;
    for (const Entry& e : s.entries)
      if (e.key == key) return &e;
  }
  return nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "missing required key");
  return e->value;
}

Real Config::get_real(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "missing required key");
  try {
    std::size_t used = 0;
    const Real v = std::stod(e->value, &used);
    if (trim(e->value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  raise(source_name, e->line, "key '" + key + "' is not a number: '" + e->value + "'");
}

int Config::get_int(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "missing required key");
  try {
    std::size_t used = 0;
    const long v = std::stol(e->value, &used);
    if (trim(e->value.substr(used)).empty()) return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  raise(source_name, e->line, "key '" + key + "' is not an integer: '" + e->value + "'");
}

std::vector<Real> Config::get_reals(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "missing required key");
  std::istringstream is(e->value);
  std::vector<Real> out;
  std::string token;
  while (is >> token) {
    try {
      std::size_t used = 0;
      const Real v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(v);
    } catch (const std::exception&) {
      raise(source_name, e->line,
            "key '" + key + "' has a non-numeric element: '" + token + "'");
    }
  }
  if (out.empty()) raise(source_name, e->line, "key '" + key + "' has no numeric values");
  return out;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

Real Config::get_real_or(const std::string& section, const std::string& key, Real fallback) const {
  return has(section, key) ? get_real(section, key) : fallback;
}

int Config::get_int_or(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  for (Section& s : sections) {
    if (s.name != section) continue;
    for (Entry& e : s.entries)
      if (e.key == key) {
        e.value = value;
        return;
      }
    s.entries.push_back(Entry{key, value, 0});
    return;
  }
  sections.push_back(Section{section, {Entry{key, value, 0}}, 0});
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& message) const {
  const Entry* e = find(section, key);
  int line = 0;
  if (e) {
    line = e->line;
  } else {
    for (const Section& s : sections)
      if (s.name == section) line = s.line;
  }
  raise(source_name, line, "[" + section + "] " + key + ": " + message);
}

Config parse_config(std::istream& is, const std::string& source_name) {
  Config cfg;
  cfg.source_name = source_name;
  std::string line;
  int lineno = 0;
  Config::Section* current = nullptr;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') raise(source_name, lineno, "unterminated section header");
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (name.empty()) raise(source_name, lineno, "empty section name");
      cfg.sections.push_back(Config::Section{name, {}, lineno});
      current = &cfg.sections.back();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) raise(source_name, lineno, "expected key = value");
    if (!current) raise(source_name, lineno, "key outside of any [section]");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) raise(source_name, lineno, "empty key");
    for (const auto& e : current->entries)
      if (e.key == key) raise(source_name, lineno, "duplicate key '" + key + "'");
    current->entries.push_back(Config::Entry{key, value, lineno});
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(is, path);
}

void serialize_config(std::ostream& os, const Config& config) {
  bool first = true;
  for (const auto& s : config.sections) {
    if (!first) os << '\n';
    first = false;
    os << '[' << s.name << "]\n";
    for (const auto& e : s.entries) os << e.key << " = " << e.value << '\n';
  }
}

}  // namespace adpbound
