#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "denot/chess/labels.hpp"
#include "denot/nn/model.hpp"

namespace denot::analysis {

/// Signed linear-observer weights arranged like the object network:
/// grid(layer, neuron), row 0 = layer nearest the input. Bias is excluded.
struct HeatMap {
  nn::Matrix grid;  // layers x width
  chess::PropertyKind property = chess::PropertyKind::MaterialAdvantage;
  std::string config_hash;

  int layers() const noexcept { return static_cast<int>(grid.rows()); }
  int width() const noexcept { return static_cast<int>(grid.cols()); }
  /// Layer-major flattening (inverse of heatmap_from_linear's reshape).
  std::vector<double> flatten() const;
};

/// Throws std::invalid_argument unless `observer` is a single sigmoid unit
/// over layers * width inputs.
HeatMap heatmap_from_linear(const nn::Model& observer, chess::PropertyKind property, std::string config_hash = {},
                            int layers = 3, int width = 128);

/// Diverging color for v in [-limit, limit]: blue (negative) through white to
/// red (positive). Returns "#rrggbb". limit == 0 maps everything to white.
std::string diverging_color(double v, double limit);

struct RenderedHeatMap {
  std::filesystem::path svg;
  std::filesystem::path csv;
};

/// Writes <stem>.svg (input-nearest layer drawn at the bottom, color scale
/// symmetric about zero with extremes at +-max|weight|) and <stem>.csv (raw
/// grid, full precision, one row per layer).
RenderedHeatMap render_heatmap(const HeatMap& map, const std::filesystem::path& out_dir, const std::string& stem);

/// Reads a grid written by render_heatmap.
nn::Matrix read_heatmap_csv(const std::filesystem::path& path);

}  // namespace denot::analysis
