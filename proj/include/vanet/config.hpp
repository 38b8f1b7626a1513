#pragma once

// YAML scenario and sweep files. Every key is optional; absent keys keep
// the Scenario defaults, unknown keys are rejected.

#include "vanet/simengine.hpp"

#include <filesystem>
#include <string>

namespace vanet {

Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& yaml);

/// Writes a scenario back out in the same format (all keys present).
std::string dump_scenario(const Scenario& s);

}  // namespace vanet
