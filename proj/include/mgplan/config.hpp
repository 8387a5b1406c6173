#pragma once

#include <filesystem>

#include "json.hpp"
#include "mgplan/catalog.hpp"

namespace mgplan {

// JSON schema (docs/config.md):
//   { "pv": {...}, "wt": {...}, "bess": {...}, "project": {...} }
// Component and project keys are the ComponentSpec / ProjectParams field
// names. Unknown keys are rejected.

Catalog catalog_from_json(const nlohmann::json& doc);
ProjectParams params_from_json(const nlohmann::json& doc);
void apply_params_json(const nlohmann::json& doc, ProjectParams& params);

nlohmann::json to_json(const ComponentSpec& spec);
nlohmann::json to_json(const Catalog& catalog);
nlohmann::json to_json(const ProjectParams& params);

// Reads a JSON file; InputError on missing file or malformed JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace mgplan
