#include "denot/analysis/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace denot::analysis {

std::vector<double> HeatMap::flatten() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index l = 0; l < grid.rows(); ++l)
    for (Eigen::Index n = 0; n < grid.cols(); ++n) out.push_back(grid(l, n));
  return out;
}

HeatMap heatmap_from_linear(const nn::Model& observer, chess::PropertyKind property, std::string config_hash,
                            int layers, int width) {
  const auto& ls = observer.layers();
  const auto* dense = ls.size() == 1 ? std::get_if<nn::DenseLayer>(&ls.front()) : nullptr;
  if (!dense || dense->outputs() != 1 || dense->activation != nn::Activation::Sigmoid)
    throw std::invalid_argument("heat maps need a linear observer (single sigmoid unit)");
  if (dense->inputs() != static_cast<std::size_t>(layers * width))
    throw std::invalid_argument("linear observer has " + std::to_string(dense->inputs()) + " inputs, expected " +
                                std::to_string(layers * width) + " (full activation geometry)");
  HeatMap map;
  map.property = property;
  map.config_hash = std::move(config_hash);
  map.grid.resize(layers, width);
  for (int l = 0; l < layers; ++l)
    for (int n = 0; n < width; ++n) map.grid(l, n) = dense->weight(0, l * width + n);
  return map;
}

std::string diverging_color(double v, double limit) {
  double t = limit > 0.0 ? std::clamp(v / limit, -1.0, 1.0) : 0.0;
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(t))));
  int r = 255, g = fade, b = fade;
  if (t < 0) {
    r = fade;
    b = 255;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

RenderedHeatMap render_heatmap(const HeatMap& map, const std::filesystem::path& out_dir, const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  RenderedHeatMap out{out_dir / (stem + ".svg"), out_dir / (stem + ".csv")};

  const double limit = map.grid.size() ? map.grid.cwiseAbs().maxCoeff() : 0.0;
  constexpr int kCellW = 6, kCellH = 28, kLeft = 70, kTop = 30, kBottom = 40;
  const int w = kLeft + map.width() * kCellW + 20;
  const int h = kTop + map.layers() * kCellH + kBottom;

  std::ofstream svg(out.svg);
  if (!svg) throw std::runtime_error("cannot write heat map: " + out.svg.string());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"13\">" << chess::property_name(map.property)
      << " linear observer weights (max |w| = " << limit << ")</text>\n";
  for (int l = 0; l < map.layers(); ++l) {
    const int y = kTop + (map.layers() - 1 - l) * kCellH;
    svg << "<text x=\"6\" y=\"" << y + kCellH / 2 + 4 << "\" font-size=\"11\">layer " << l + 1 << "</text>\n";
    for (int n = 0; n < map.width(); ++n) {
      svg << "<rect class=\"cell\" x=\"" << kLeft + n * kCellW << "\" y=\"" << y << "\" width=\"" << kCellW
          << "\" height=\"" << kCellH << "\" fill=\"" << diverging_color(map.grid(l, n), limit) << "\"/>\n";
    }
  }
  const int legend_y = kTop + map.layers() * kCellH + 12;
  for (int i = 0; i <= 20; ++i) {
    const double v = limit * (i - 10) / 10.0;
    svg << "<rect x=\"" << kLeft + i * 10 << "\" y=\"" << legend_y << "\" width=\"10\" height=\"10\" fill=\""
        << diverging_color(v, limit) << "\"/>\n";
  }
  svg << "<text x=\"" << kLeft + 220 << "\" y=\"" << legend_y + 9 << "\" font-size=\"10\">-" << limit << " .. 0 .. +"
      << limit << "</text>\n";
  svg << "</svg>\n";

  std::ofstream csv(out.csv);
  if (!csv) throw std::runtime_error("cannot write heat map CSV: " + out.csv.string());
  csv.precision(17);
  for (int l = 0; l < map.layers(); ++l) {
    for (int n = 0; n < map.width(); ++n) csv << (n ? "," : "") << map.grid(l, n);
    csv << '\n';
  }
  if (!svg || !csv) throw std::runtime_error("failed writing heat map files in " + out_dir.string());
  return out;
}

nn::Matrix read_heatmap_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open heat map CSV: " + path.string());
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::istringstream row(line);
    rows.emplace_back();
    for (std::string cell; std::getline(row, cell, ',');) rows.back().push_back(std::stod(cell));
  }
  if (rows.empty()) return {};
  nn::Matrix grid(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t l = 0; l < rows.size(); ++l) {
    if (rows[l].size() != rows.front().size()) throw std::runtime_error("ragged heat map CSV: " + path.string());
    for (std::size_t n = 0; n < rows[l].size(); ++n) grid(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n)) = rows[l][n];
  }
  return grid;
}

}  // namespace denot::analysis
