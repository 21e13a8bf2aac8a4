#pragma once

// Minimal structural validator for the draft-07 subset our schemas use:
// type (string or list), properties, required, additionalProperties (bool),
// items (single schema), enum.  Test-only.

#include <json.hpp>

#include <string>

namespace schema_check {

using nlohmann::json;

inline bool type_matches(const std::string& t, const json& v) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

inline bool validate(const json& schema, const json& value, std::string& err,
                     const std::string& path = "$") {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(t.get<std::string>(), value);
    } else {
      for (const auto& alt : t)
        if (type_matches(alt.get<std::string>(), value)) ok = true;
    }
    if (!ok) {
      err = path + ": type mismatch, got " + value.dump();
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& alt : schema["enum"])
      if (alt == value) ok = true;
    if (!ok) {
      err = path + ": " + value.dump() + " not in enum";
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          err = path + ": missing required key " + key.get<std::string>();
          return false;
        }
      }
    }
    const json props =
        schema.contains("properties") ? schema["properties"] : json::object();
    bool extra_ok = true;
    if (schema.contains("additionalProperties"))
      extra_ok = schema["additionalProperties"].get<bool>();
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        if (!validate(props[key], sub, err, path + "." + key)) return false;
      } else if (!extra_ok) {
        err = path + ": unexpected key " + key;
        return false;
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    size_t i = 0;
    for (const auto& item : value) {
      if (!validate(schema["items"], item, err,
                    path + "[" + std::to_string(i) + "]"))
        return false;
      ++i;
    }
  }
  return true;
}

}  // namespace schema_check
