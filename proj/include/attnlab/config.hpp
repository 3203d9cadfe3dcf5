#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace attnlab {

struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(const std::string& k, const std::string& msg)
      : std::runtime_error(msg), key(k) {}
};

// Flat `key = value` text config. `#` starts a comment, blank lines ignored.
class Config {
 public:
  static Config parse(std::istream& in) {
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("", "config line " + std::to_string(lineno) + ": expected key = value");
      cfg.kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    return parse(in);
  }

  static Config parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  const std::string& raw(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError(key, "missing config key: " + key);
    return it->second;
  }

  template <typename T>
  T get(const std::string& key) const {
    return convert<T>(key, raw(key));
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    return get<T>(key);
  }

  // comma-separated list
  template <typename T>
  std::vector<T> get_list(const std::string& key) const {
    std::vector<T> out;
    std::stringstream ss(raw(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(convert<T>(key, trim(item)));
    return out;
  }

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& items() const { return kv_; }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
  }

  template <typename T>
  static T convert(const std::string& key, const std::string& v);

  std::map<std::string, std::string> kv_;
};

template <>
inline std::string Config::convert<std::string>(const std::string&, const std::string& v) {
  return v;
}

template <>
inline double Config::convert<double>(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "config key " + key + ": not a number: '" + v + "'");
  }
}

template <>
inline long Config::convert<long>(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "config key " + key + ": not an integer: '" + v + "'");
  }
}

template <>
inline int Config::convert<int>(const std::string& key, const std::string& v) {
  return static_cast<int>(convert<long>(key, v));
}

template <>
inline std::uint64_t Config::convert<std::uint64_t>(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "config key " + key + ": not an unsigned integer: '" + v + "'");
  }
}

template <>
inline bool Config::convert<bool>(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "config key " + key + ": not a bool: '" + v + "'");
}

}  // namespace attnlab
