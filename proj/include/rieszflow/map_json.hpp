#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rieszflow/maps.hpp"

namespace rieszflow {

// {"dimension": 1, "blocks": [{"affine": {"alpha": a, "beta": b}} |
//  {"residual": {"lipschitz": L, "activation": "tanh",
//                "layers": [{"w": [[...], ...], "b": [...]}, ...]}}]}
//
// Doubles are written in shortest round-trip form, so save → load
// reproduces every parameter bit for bit.

nlohmann::json map_to_json(const MapSpec& m);

/// Throws ParseError on schema violations, InvalidArgument/Unsupported on
/// invalid content (e.g. alpha ≤ 0, dimension ≠ 1).
MapSpec map_from_json(const nlohmann::json& j);

std::string map_to_string(const MapSpec& m);
MapSpec map_from_string(const std::string& text);

void save_map(const MapSpec& m, const std::filesystem::path& path);
MapSpec load_map(const std::filesystem::path& path);

}  // namespace rieszflow
