#pragma once

// Strict-schema helpers shared by the config readers.

#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qsearch/errors.hpp"

namespace qsearch::detail {

using nlohmann::json;

inline void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
}

inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                       std::string_view where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

inline const json& need(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(where) + ": missing required key '" + key + "'");
  return *it;
}

inline double as_number(const json& v, std::string_view what) {
  if (!v.is_number()) throw ConfigError(std::string(what) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
  return x;
}

inline std::uint64_t as_unsigned(const json& v, std::string_view what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    // 1e6 style literals are convenient for n
    const double x = v.get<double>();
    if (x >= 0 && x == std::floor(x) && x < 9.0e15) return static_cast<std::uint64_t>(x);
  }
  throw ConfigError(std::string(what) + " must be a non-negative integer");
}

inline std::string as_string(const json& v, std::string_view what) {
  if (!v.is_string()) throw ConfigError(std::string(what) + " must be a string");
  return v.get<std::string>();
}

inline bool as_bool(const json& v, std::string_view what) {
  if (!v.is_boolean()) throw ConfigError(std::string(what) + " must be true or false");
  return v.get<bool>();
}

}  // namespace qsearch::detail
