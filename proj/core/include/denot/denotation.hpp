#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "denot/analysis/heatmap.hpp"
#include "denot/object_model.hpp"
#include "denot/observer.hpp"

namespace denot::denotation {

struct Position {
  int layer = 0;  // 0 = nearest the input
  int neuron = 0;
  friend auto operator<=>(const Position&, const Position&) = default;
};

/// A nonempty, duplicate-free set of activation positions, kept in
/// (layer, neuron) order.
class Silhouette {
 public:
  /// Sorts and deduplicates; throws std::invalid_argument when empty or
  /// when a position lies outside the geometry.
  explicit Silhouette(std::vector<Position> positions, observer::ActivationGeometry geometry = {});

  static Silhouette full(observer::ActivationGeometry geometry = {});
  static Silhouette single(int layer, int neuron, observer::ActivationGeometry geometry = {});

  /// Parses "all" or positions "layer:neuron" separated by commas or spaces.
  static Silhouette parse(std::string_view text, observer::ActivationGeometry geometry = {});

  const std::vector<Position>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  bool is_full() const noexcept { return positions_.size() == static_cast<std::size_t>(geometry_.size()); }
  observer::ActivationGeometry geometry() const noexcept { return geometry_; }
  /// Flat layer-major indices (layer * width + neuron), ascending.
  std::vector<int> flat() const;
  /// "all" for the full geometry, else "l:n l:n ...".
  std::string to_string() const;

  friend bool operator==(const Silhouette& a, const Silhouette& b) { return a.positions_ == b.positions_; }

 private:
  std::vector<Position> positions_;
  observer::ActivationGeometry geometry_;
};

/// Keeps only the silhouette's activation rows, in canonical order. Labels
/// and board ids are unchanged. Throws std::invalid_argument when the dataset
/// does not hold one of the positions.
object::SnapshotDataset restrict(const object::SnapshotDataset& data, const Silhouette& silhouette);

/// 1 iff every selected activation is strictly greater than the threshold.
/// `snapshot` is a full layer-major activation vector.
int and_gate_predict(std::span<const double> snapshot, const Silhouette& silhouette,
                     double activation_threshold = 0.0);

/// Row-wise and-gate over a snapshot dataset holding the silhouette.
std::vector<int> and_gate_predict(const object::SnapshotDataset& data, const Silhouette& silhouette,
                                  double activation_threshold = 0.0);

enum class Family { AndGate, Linear, Mlp, Conv };
enum class Measure { F1, Accuracy };

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);
std::string_view measure_name(Measure m);
Measure measure_from_name(std::string_view name);

struct DenotationResult {
  Silhouette silhouette = Silhouette::full();
  chess::PropertyKind property = chess::PropertyKind::MaterialAdvantage;
  Family family = Family::Linear;
  Measure measure = Measure::F1;
  double threshold = 0.0;
  nn::Metrics test;  // held-out observer test set
  double performance = 0.0;
  double all_positive_f1 = 0.0;
  double test_label_proportion = 0.0;
  bool verdict = false;
};

/// verdict = performance >= t.
bool denotes(double performance, double t) noexcept;

struct AssessConfig {
  nn::TrainConfig train{};
  std::uint64_t seed = 0;
  double activation_threshold = 0.0;  // and-gate only
};

/// Restricts both datasets, fits the family on `train` (the and-gate needs no
/// fit), evaluates on `test` and compares the chosen measure to `t`. Throws
/// std::invalid_argument for Conv with a partial silhouette.
DenotationResult assess_denotation(const object::SnapshotDataset& train, const object::SnapshotDataset& test,
                                   const Silhouette& silhouette, Family family, double t, Measure measure,
                                   const AssessConfig& config = {});

/// The k positions with the largest |weight|; ties go to the smaller
/// (layer, neuron). Throws when k is 0 or exceeds the grid size.
Silhouette top_weight_silhouette(const analysis::HeatMap& map, std::size_t k);

std::string result_json(const DenotationResult& r);
DenotationResult result_from_json(std::string_view json);

/// silhouette,family,property,measure,performance,t,verdict.
std::string ledger_csv(std::span<const DenotationResult> results);

}  // namespace denot::denotation
