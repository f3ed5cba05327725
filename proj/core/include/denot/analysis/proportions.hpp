#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "denot/chess/position_cache.hpp"
#include "denot/nn/model.hpp"

namespace denot::analysis {

/// Median with the midpoint-average convention for even counts. Throws on
/// empty input.
double median(std::vector<double> values);

/// Per-neuron activation proportions: p(layer, neuron) = fraction of boards
/// on which the neuron's activation is strictly positive.
struct ProportionReport {
  std::vector<std::vector<double>> proportions;  // [layer][neuron]
  std::vector<std::vector<double>> sorted_by_layer;
  std::vector<double> sorted_overall;
  std::vector<double> layer_medians;
  double overall_median = 0.0;
  std::vector<std::size_t> annihilated;  // per layer: neurons with p == 0
  std::size_t boards = 0;
  std::string dataset_id;
};

/// Builds a report from exact positive counts (counts[layer][neuron]).
ProportionReport report_from_counts(const std::vector<std::vector<std::size_t>>& counts, std::size_t boards,
                                    std::string dataset_id = {});

/// Counts activations > 0 in a recorded-activation matrix (rows stacked by
/// layer, each `width` wide; one column per board).
ProportionReport proportions_from_activations(const nn::Matrix& activations, std::size_t layers, std::size_t width,
                                              std::string dataset_id = {});

/// Runs the object model over `boards` and reports per-neuron proportions.
/// Throws std::invalid_argument on an empty board set.
ProportionReport neuron_label_proportions(const nn::Model& object_model, std::span<const chess::PositionRecord> boards,
                                          std::string dataset_id = {});

struct ControlDraw {
  double median = 0.0;
  double achieved_fraction = 0.0;
  std::size_t annihilated = 0;
};

/// Randomly (seeded) zeroes additional non-annihilated proportions until the
/// annihilated count reaches round(target_fraction * n), then returns the
/// median. Throws std::invalid_argument when the target is below the current
/// annihilated fraction (beyond one-neuron granularity) or outside [0, 1].
ControlDraw annihilation_control(std::span<const double> layer_proportions, double target_fraction, std::uint64_t seed);

struct ControlSummary {
  double target_fraction = 0.0;
  ControlDraw single;  // the draw with the base seed
  double mean_median = 0.0;
  double stddev_median = 0.0;
  double min_median = 0.0;
  double max_median = 0.0;
  std::size_t repetitions = 0;
  std::uint64_t base_seed = 0;
};

/// Repeats annihilation_control with seeds base_seed, base_seed + 1, ...
ControlSummary annihilation_control_repeated(std::span<const double> layer_proportions, double target_fraction,
                                             std::uint64_t base_seed, std::size_t repetitions = 100);

/// Right-continuous empirical CDF: one (value, cumulative fraction) step per
/// distinct value, ascending, ending at 1.
using Cdf = std::vector<std::pair<double, double>>;
Cdf empirical_cdf(std::span<const double> values);

struct CdfTable {
  Cdf overall;
  std::vector<Cdf> layers;
  double overall_median = 0.0;
};

CdfTable layer_cdfs(const ProportionReport& report);

/// SVG with the overall curve and one curve per layer, plus a dashed
/// vertical line at the overall median.
void render_cdf_svg(const CdfTable& table, const std::filesystem::path& path);

/// CSV: curve,proportion,cumulative_fraction.
std::string cdf_table_csv(const CdfTable& table);

std::string proportion_report_json(const ProportionReport& report);
ProportionReport proportion_report_from_json(const std::string& json);

/// layer,neuron,proportion_train,proportion_test.
std::string proportion_csv(const ProportionReport& train, const ProportionReport& test);

}  // namespace denot::analysis
