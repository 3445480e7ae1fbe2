#pragma once

// Run manifest and JSON configuration for the beamdecay tool.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "beamdecay/discretization.hpp"
#include "beamdecay/model.hpp"
#include "beamdecay/timestepper.hpp"

namespace beamdecay::cli {

using Json = nlohmann::json;

struct RunManifest {
    std::string command;
    std::optional<std::string> config_path;
    std::string output_dir = "out";
    std::vector<std::string> overrides;  ///< "key=value", dotted keys
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

/// Reads the config (empty object without a path), applies the overrides,
/// then --seed / --workers. Throws CONFIG_ERROR.
Json load_config(const RunManifest& manifest);

/// "a.b.c=value": value parsed as JSON when possible, else kept as a string.
void apply_override(Json& config, std::string_view assignment);

BeamSpec beam_from_config(const Json& config);
BoundaryControls controls_from_config(const Json& config);
InitialConditions initial_from_config(const Json& config, double length);
Mesh mesh_from_config(const Json& config, double length);
/// "dt": number or "auto" (default rule).
IntegratorConfig integrator_from_config(const Json& config, const DiscreteBeam& beam);
/// Certificate penalty; 0 selects the automatic policy.
double lambda_from_config(const Json& config);

/// Value at a JSON pointer such as "/integrator/t_final", or the fallback.
template <class T>
T value_or(const Json& config, const std::string& pointer, T fallback) {
    const Json::json_pointer p(pointer);
    if (!config.contains(p) || config.at(p).is_null()) return fallback;
    return config.at(p).get<T>();
}

}  // namespace beamdecay::cli
