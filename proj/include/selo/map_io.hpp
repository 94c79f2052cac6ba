// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "selo/pipeline.hpp"

namespace selo {

/// NumPy .npy, little-endian float32, C order, shape (H, W).
void write_npy(const std::filesystem::path& path, const ProbabilityMap& map);
ProbabilityMap read_npy(const std::filesystem::path& path);

/// 16-bit grayscale PNG, value = round(p * 65535) with p clamped to [0, 1].
void write_map_png(const std::filesystem::path& path, const ProbabilityMap& map);
ProbabilityMap read_map_png(const std::filesystem::path& path);

/// Reads either format by extension (.npy or .png).
ProbabilityMap read_map(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace selo
