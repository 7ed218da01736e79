#pragma once

#include "gcgeo/checks.hpp"
#include "gcgeo/fields.hpp"

namespace gcgeo {

// A scene is a JSON document selecting built-in checks and, optionally,
// declaring charts and expression-tree fields with generic checks on them
// (schema version 1; see README for the grammar).
struct Scene {
  RunConfig config;
  std::vector<std::pair<std::string, CheckFn>> checks;
  // declared objects, addressable by name
  std::map<std::string, ChartPtr> charts;
  std::map<std::string, FormField> fields;
};

// Throws std::invalid_argument on schema violations (CLI exit code 2).
Scene load_scene(const nlohmann::json& doc);
Scene load_scene_file(const std::string& path);

// Serializes a built-in fixture family to the scene format: charts with
// constraint expressions, fields as expression strings, default checks.
nlohmann::ordered_json export_scene(const std::string& builtin);

}  // namespace gcgeo
