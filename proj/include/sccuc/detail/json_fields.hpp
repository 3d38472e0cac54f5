#pragma once

// Strict field access for the JSON input files. Every failure names the
// dotted path of the offending field.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sccuc/error.hpp"

namespace sccuc::detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& key,
                                      const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("missing field '" + where + "." + key + "'");
  return *it;
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError("field '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

inline int require_int(const nlohmann::json& obj, const std::string& key,
                       const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError("field '" + where + "." + key + "' must be an integer");
  }
  return v.get<int>();
}

inline std::string require_string(const nlohmann::json& obj, const std::string& key,
                                  const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError("field '" + where + "." + key + "' must be a string");
  return v.get<std::string>();
}

inline const nlohmann::json& require_array(const nlohmann::json& obj, const std::string& key,
                                           const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_array()) throw SchemaError("field '" + where + "." + key + "' must be an array");
  return v;
}

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<std::string_view> allowed,
                                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SchemaError("unknown field '" + where + "." + it.key() + "'");
  }
}

}  // namespace sccuc::detail
