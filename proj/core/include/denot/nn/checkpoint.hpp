#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "denot/nn/model.hpp"

namespace denot::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Checkpoint layout: "DNCK" magic, u32 format version, u32-length JSON
/// header describing every layer (kind, shapes, activation) and the recording
/// points, then each layer's weights (column-major) and biases as f64.
void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(const std::filesystem::path& path);  // throws std::runtime_error

/// The JSON layer description used in checkpoint headers.
std::string describe_architecture(const Model& model);

}  // namespace denot::nn
