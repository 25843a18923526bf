#pragma once

#include <filesystem>
#include <string>

#include "ppcsim/model.hpp"

namespace ppcsim {

// Canonical JSON (sorted keys, 2-space indent); loading the saved form and
// saving again reproduces the bytes exactly.
std::string to_json_string(const Structure& s);
Structure structure_from_json(const std::string& text);
Structure load_structure(const std::filesystem::path& file);
void save_structure(const Structure& s, const std::filesystem::path& file);

std::string to_json_string(const Scenario& s);
// `base_dir` resolves a relative structure file reference.
Scenario scenario_from_json(const std::string& text,
                            const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& file);
void save_scenario(const Scenario& s, const std::filesystem::path& file);

}  // namespace ppcsim
