#pragma once

#include "tcd/core/scene.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace tcd {

/// Reads a scene CSV: a header of variable names followed by one row of
/// decimal reals per sample. The scene id is the file stem. When `variant` is
/// not given it is inferred from the names: all ending in ".a" means
/// acceleration, anything else is treated as velocity.
TimeSeriesScene load_scene_csv(const std::filesystem::path& path, double sample_rate_hz,
                               std::optional<Variant> variant = std::nullopt);

/// Parses CSV text directly; `source` is used in error messages.
TimeSeriesScene parse_scene_csv(const std::string& text, const std::string& scene_id,
                                double sample_rate_hz, std::optional<Variant> variant = std::nullopt);

/// Writes the shortest decimal form of each value that reads back to the same double.
void save_scene_csv(const TimeSeriesScene& scene, const std::filesystem::path& path);

std::string format_scene_csv(const TimeSeriesScene& scene);

/// Shortest round-trip representation of a double.
std::string format_double(double v);

}  // namespace tcd
