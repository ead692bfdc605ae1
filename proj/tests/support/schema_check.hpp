#pragma once

// Minimal JSON-Schema checker covering the subset the ground-task schema
// uses: type, enum, required, properties, additionalProperties, items,
// minItems, minimum, oneOf and #/definitions references.

#include <string>

#include "json.hpp"

namespace schema_check {

using Json = nlohmann::json;

class Validator {
 public:
  explicit Validator(Json schema) : root_(std::move(schema)) {}

  /// Returns "" when `value` conforms, otherwise "<path>: <problem>".
  std::string validate(const Json& value) const { return check(root_, value, "$"); }

 private:
  Json root_;

  const Json& deref(const Json& schema) const {
    if (schema.is_object() && schema.contains("$ref")) {
      std::string ref = schema["$ref"].get<std::string>();
      const std::string prefix = "#/definitions/";
      if (ref.rfind(prefix, 0) == 0) {
        const auto& defs = root_.at("definitions");
        return deref(defs.at(ref.substr(prefix.size())));
      }
    }
    return schema;
  }

  static bool type_matches(const std::string& type, const Json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer();
    if (type == "number") return value.is_number();
    if (type == "null") return value.is_null();
    if (type == "boolean") return value.is_boolean();
    return false;
  }

  std::string check(const Json& raw_schema, const Json& value, const std::string& path) const {
    const Json& schema = deref(raw_schema);

    if (schema.contains("oneOf")) {
      int matches = 0;
      std::string last_error;
      for (const auto& option : schema["oneOf"]) {
        std::string error = check(option, value, path);
        if (error.empty())
          ++matches;
        else
          last_error = error;
      }
      if (matches != 1)
        return path + ": matches " + std::to_string(matches) +
               " alternatives of oneOf (last problem: " + last_error + ")";
      return "";
    }

    if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), value))
      return path + ": expected type " + schema["type"].get<std::string>();

    if (schema.contains("enum")) {
      bool found = false;
      for (const auto& candidate : schema["enum"]) found = found || candidate == value;
      if (!found) return path + ": value not in enum";
    }

    if (schema.contains("minimum") && value.is_number() &&
        value.get<double>() < schema["minimum"].get<double>())
      return path + ": below minimum";

    if (value.is_object()) {
      if (schema.contains("required"))
        for (const auto& key : schema["required"])
          if (!value.contains(key.get<std::string>()))
            return path + ": missing required key \"" + key.get<std::string>() + "\"";
      const Json* properties = schema.contains("properties") ? &schema["properties"] : nullptr;
      for (const auto& [key, member] : value.items()) {
        std::string sub = path + "." + key;
        if (properties && properties->contains(key)) {
          std::string error = check((*properties)[key], member, sub);
          if (!error.empty()) return error;
        } else if (schema.contains("additionalProperties")) {
          const Json& extra = schema["additionalProperties"];
          if (extra.is_boolean() && !extra.get<bool>())
            return sub + ": unexpected key";
          if (!extra.is_boolean()) {
            std::string error = check(extra, member, sub);
            if (!error.empty()) return error;
          }
        }
      }
    }

    if (value.is_array()) {
      if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>())
        return path + ": fewer than minItems elements";
      if (schema.contains("items"))
        for (std::size_t i = 0; i < value.size(); ++i) {
          std::string error =
              check(schema["items"], value[i], path + "[" + std::to_string(i) + "]");
          if (!error.empty()) return error;
        }
    }
    return "";
  }
};

}  // namespace schema_check
