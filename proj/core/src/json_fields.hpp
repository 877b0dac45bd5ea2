#pragma once

// Field access on nlohmann::json with dotted-path error reporting. Private to
// the core library.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sben/errors.hpp"
#include "sben/scenario.hpp"
#include "sben/symplectic.hpp"

namespace sben::detail {

using nlohmann::json;

inline std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw ConfigError(join(path, key), "required field missing");
  return *it;
}

inline const json* optional(const json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

inline double number(const json& obj, const std::string& key, const std::string& path) {
  return as_number(require(obj, key, path), join(path, key));
}

inline double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  const json* v = optional(obj, key);
  return v ? as_number(*v, join(path, key)) : fallback;
}

inline int integer_or(const json& obj, const std::string& key, const std::string& path, int fallback) {
  const json* v = optional(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v->get<int>();
}

inline bool boolean_or(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  const json* v = optional(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v->get<bool>();
}

inline double positive(const json& obj, const std::string& key, const std::string& path) {
  const double v = number(obj, key, path);
  if (!(v > 0.0)) throw ConfigError(join(path, key), "must be > 0");
  return v;
}

inline Vector vector_of(const json& v, int n, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (static_cast<int>(v.size()) != n)
    throw ConfigError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  Vector out(n);
  for (int i = 0; i < n; ++i) out[i] = as_number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return out;
}

json parse_json(std::string_view text, const std::string& what);
Scenario scenario_from_json(const json& obj, const std::filesystem::path& base_dir, const std::string& path);

}  // namespace sben::detail
