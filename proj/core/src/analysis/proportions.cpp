#include "denot/analysis/proportions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "denot/object_model.hpp"
#include "denot/util/rng.hpp"

namespace denot::analysis {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ProportionReport report_from_counts(const std::vector<std::vector<std::size_t>>& counts, std::size_t boards,
                                    std::string dataset_id) {
  if (boards == 0) throw std::invalid_argument("proportions need at least one board");
  ProportionReport r;
  r.boards = boards;
  r.dataset_id = std::move(dataset_id);
  for (const auto& layer : counts) {
    std::vector<double> p;
    std::size_t dead = 0;
    for (std::size_t c : layer) {
      if (c > boards) throw std::invalid_argument("positive count exceeds board count");
      p.push_back(static_cast<double>(c) / static_cast<double>(boards));
      dead += c == 0;
    }
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    r.layer_medians.push_back(sorted.empty() ? 0.0 : median(sorted));
    r.sorted_overall.insert(r.sorted_overall.end(), sorted.begin(), sorted.end());
    r.proportions.push_back(std::move(p));
    r.sorted_by_layer.push_back(std::move(sorted));
    r.annihilated.push_back(dead);
  }
  std::sort(r.sorted_overall.begin(), r.sorted_overall.end());
  if (!r.sorted_overall.empty()) r.overall_median = median(r.sorted_overall);
  return r;
}

ProportionReport proportions_from_activations(const nn::Matrix& activations, std::size_t layers, std::size_t width,
                                              std::string dataset_id) {
  if (static_cast<std::size_t>(activations.rows()) != layers * width)
    throw std::invalid_argument("activation rows do not match " + std::to_string(layers) + "x" +
                                std::to_string(width));
  std::vector<std::vector<std::size_t>> counts(layers, std::vector<std::size_t>(width, 0));
  for (Eigen::Index b = 0; b < activations.cols(); ++b)
    for (std::size_t l = 0; l < layers; ++l)
      for (std::size_t n = 0; n < width; ++n)
        counts[l][n] += activations(static_cast<Eigen::Index>(l * width + n), b) > 0.0;
  return report_from_counts(counts, static_cast<std::size_t>(activations.cols()), std::move(dataset_id));
}

ProportionReport neuron_label_proportions(const nn::Model& object_model, std::span<const chess::PositionRecord> boards,
                                          std::string dataset_id) {
  if (boards.empty()) throw std::invalid_argument("neuron_label_proportions: no boards");
  const auto& points = object_model.recording_points();
  if (points.empty()) throw std::invalid_argument("object model has no recording points");
  const std::size_t layers = points.size();
  const std::size_t width = object_model.recorded_width() / layers;
  // Chunked so large board sets never hold every activation at once.
  constexpr std::size_t kChunk = 4096;
  std::vector<std::vector<std::size_t>> counts(layers, std::vector<std::size_t>(width, 0));
  for (std::size_t begin = 0; begin < boards.size(); begin += kChunk) {
    const auto acts = object::record_activations(object_model, boards.subspan(begin, std::min(kChunk, boards.size() - begin)));
    for (Eigen::Index b = 0; b < acts.cols(); ++b)
      for (std::size_t i = 0; i < layers * width; ++i) counts[i / width][i % width] += acts(static_cast<Eigen::Index>(i), b) > 0.0;
  }
  return report_from_counts(counts, boards.size(), std::move(dataset_id));
}

ControlDraw annihilation_control(std::span<const double> layer_proportions, double target_fraction, std::uint64_t seed) {
  const std::size_t n = layer_proportions.size();
  if (n == 0) throw std::invalid_argument("annihilation_control: empty layer");
  if (!(target_fraction >= 0.0 && target_fraction <= 1.0))
    throw std::invalid_argument("annihilation_control: target fraction outside [0, 1]");
  std::vector<double> p(layer_proportions.begin(), layer_proportions.end());
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < n; ++i)
    if (p[i] != 0.0) alive.push_back(i);
  const std::size_t dead = n - alive.size();
  const double current = static_cast<double>(dead) / static_cast<double>(n);
  if (target_fraction < current - 1e-12)
    throw std::invalid_argument("annihilation_control: target fraction " + std::to_string(target_fraction) +
                                " is below the current annihilated fraction " + std::to_string(current));
  const auto target = static_cast<std::size_t>(std::llround(target_fraction * static_cast<double>(n)));
  const std::size_t extra = target > dead ? target - dead : 0;

  util::Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(alive));
  for (std::size_t i = 0; i < extra; ++i) p[alive[i]] = 0.0;

  ControlDraw d;
  d.annihilated = dead + extra;
  d.achieved_fraction = static_cast<double>(d.annihilated) / static_cast<double>(n);
  d.median = median(std::move(p));
  return d;
}

ControlSummary annihilation_control_repeated(std::span<const double> layer_proportions, double target_fraction,
                                             std::uint64_t base_seed, std::size_t repetitions) {
  if (repetitions == 0) throw std::invalid_argument("annihilation_control: zero repetitions");
  ControlSummary s;
  s.target_fraction = target_fraction;
  s.repetitions = repetitions;
  s.base_seed = base_seed;
  std::vector<double> medians;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto d = annihilation_control(layer_proportions, target_fraction, base_seed + r);
    if (r == 0) s.single = d;
    medians.push_back(d.median);
  }
  double sum = 0.0;
  for (double m : medians) sum += m;
  s.mean_median = sum / static_cast<double>(medians.size());
  double ss = 0.0;
  for (double m : medians) ss += (m - s.mean_median) * (m - s.mean_median);
  s.stddev_median = medians.size() > 1 ? std::sqrt(ss / static_cast<double>(medians.size() - 1)) : 0.0;
  const auto [lo, hi] = std::minmax_element(medians.begin(), medians.end());
  s.min_median = *lo;
  s.max_median = *hi;
  return s;
}

Cdf empirical_cdf(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  Cdf cdf;
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    cdf.emplace_back(v[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

CdfTable layer_cdfs(const ProportionReport& report) {
  CdfTable t;
  t.overall = empirical_cdf(report.sorted_overall);
  for (const auto& layer : report.sorted_by_layer) t.layers.push_back(empirical_cdf(layer));
  t.overall_median = report.overall_median;
  return t;
}

namespace {

std::string curve_name(std::size_t i) { return "layer" + std::to_string(i + 1); }

// Step polyline in plot coordinates, starting at (0, 0).
std::string step_points(const Cdf& cdf, double x0, double y0, double w, double h) {
  std::ostringstream out;
  double prev = 0.0;
  auto pt = [&](double x, double y) { out << x0 + x * w << ',' << y0 + h - y * h << ' '; };
  pt(0.0, 0.0);
  for (const auto& [x, y] : cdf) {
    pt(x, prev);
    pt(x, y);
    prev = y;
  }
  pt(1.0, prev);
  return out.str();
}

}  // namespace

void render_cdf_svg(const CdfTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream svg(path);
  if (!svg) throw std::runtime_error("cannot write CDF plot: " + path.string());
  constexpr double kX = 60, kY = 30, kW = 420, kH = 300;
  static const char* kColors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"380\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
      << "<rect x=\"" << kX << "\" y=\"" << kY << "\" width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    svg << "<text x=\"" << kX + f * kW - 8 << "\" y=\"" << kY + kH + 16 << "\" font-size=\"10\">" << f << "</text>\n"
        << "<text x=\"" << kX - 30 << "\" y=\"" << kY + kH - f * kH + 4 << "\" font-size=\"10\">" << f << "</text>\n";
  }
  svg << "<text x=\"" << kX + kW / 2 - 40 << "\" y=\"" << kY + kH + 34 << "\" font-size=\"12\">label proportion</text>\n";
  svg << "<polyline class=\"cdf\" data-curve=\"all\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\""
      << step_points(table.overall, kX, kY, kW, kH) << "\"/>\n";
  for (std::size_t l = 0; l < table.layers.size(); ++l)
    svg << "<polyline class=\"cdf\" data-curve=\"" << curve_name(l) << "\" fill=\"none\" stroke=\""
        << kColors[l % std::size(kColors)] << "\" stroke-width=\"1.5\" points=\""
        << step_points(table.layers[l], kX, kY, kW, kH) << "\"/>\n";
  const double mx = kX + table.overall_median * kW;
  svg << "<line class=\"median\" x1=\"" << mx << "\" y1=\"" << kY << "\" x2=\"" << mx << "\" y2=\"" << kY + kH
      << "\" stroke=\"#000000\" stroke-dasharray=\"5,4\"/>\n";
  double ly = kY + 10;
  svg << "<text x=\"" << kX + kW + 12 << "\" y=\"" << ly << "\" font-size=\"11\" fill=\"#d62728\">all (median "
      << table.overall_median << ")</text>\n";
  for (std::size_t l = 0; l < table.layers.size(); ++l) {
    ly += 16;
    svg << "<text x=\"" << kX + kW + 12 << "\" y=\"" << ly << "\" font-size=\"11\" fill=\""
        << kColors[l % std::size(kColors)] << "\">" << curve_name(l) << "</text>\n";
  }
  svg << "</svg>\n";
  if (!svg) throw std::runtime_error("failed writing CDF plot: " + path.string());
}

std::string cdf_table_csv(const CdfTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "curve,proportion,cumulative_fraction\n";
  for (const auto& [x, y] : table.overall) out << "all," << x << ',' << y << '\n';
  for (std::size_t l = 0; l < table.layers.size(); ++l)
    for (const auto& [x, y] : table.layers[l]) out << curve_name(l) << ',' << x << ',' << y << '\n';
  return out.str();
}

std::string proportion_report_json(const ProportionReport& r) {
  const nlohmann::json j = {{"dataset_id", r.dataset_id},         {"boards", r.boards},
                            {"proportions", r.proportions},       {"layer_medians", r.layer_medians},
                            {"overall_median", r.overall_median}, {"annihilated", r.annihilated}};
  return j.dump(2);
}

ProportionReport proportion_report_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto boards = j.at("boards").get<std::size_t>();
  const auto p = j.at("proportions").get<std::vector<std::vector<double>>>();
  // Rebuild derived fields from exact counts so the report stays consistent.
  std::vector<std::vector<std::size_t>> counts;
  for (const auto& layer : p) {
    counts.emplace_back();
    for (double v : layer) counts.back().push_back(static_cast<std::size_t>(std::llround(v * static_cast<double>(boards))));
  }
  return report_from_counts(counts, boards, j.at("dataset_id").get<std::string>());
}

std::string proportion_csv(const ProportionReport& train, const ProportionReport& test) {
  if (train.proportions.size() != test.proportions.size())
    throw std::invalid_argument("proportion_csv: layer counts differ");
  std::ostringstream out;
  out.precision(17);
  out << "layer,neuron,proportion_train,proportion_test\n";
  for (std::size_t l = 0; l < train.proportions.size(); ++l) {
    if (train.proportions[l].size() != test.proportions[l].size())
      throw std::invalid_argument("proportion_csv: layer widths differ");
    for (std::size_t n = 0; n < train.proportions[l].size(); ++n)
      out << l << ',' << n << ',' << train.proportions[l][n] << ',' << test.proportions[l][n] << '\n';
  }
  return out.str();
}

}  // namespace denot::analysis
