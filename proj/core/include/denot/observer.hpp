#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "denot/object_model.hpp"

namespace denot::observer {

enum class ObserverKind { Linear, Mlp, Conv };

inline constexpr std::array<ObserverKind, 3> kAllObservers = {ObserverKind::Linear, ObserverKind::Mlp,
                                                              ObserverKind::Conv};

std::string_view observer_name(ObserverKind kind);
ObserverKind observer_from_name(std::string_view name);  // throws std::invalid_argument

/// Activation-image geometry seen by the conv observer: recorded layers are
/// rows (shallow to deep), neurons are columns, one channel.
struct ActivationGeometry {
  int layers = 3;
  int width = 128;
  int size() const noexcept { return layers * width; }
};

/// Linear: one sigmoid unit over the inputs (logistic regression).
/// Mlp: three ReLU layers of 256, sigmoid output.
/// Conv: three 3x3 same-padded ReLU conv layers with 32 channels over the
/// geometry image, then two ReLU dense layers of 256 and a sigmoid output.
/// `inputs` applies to Linear/Mlp; Conv always consumes the full geometry.
nn::Model build_observer(ObserverKind kind, std::uint64_t seed, std::size_t inputs = 384,
                         ActivationGeometry geometry = {});

/// Mean of binary labels; throws std::invalid_argument when empty.
double label_proportion(std::span<const int> labels);

struct ObserverReport {
  ObserverKind kind = ObserverKind::Linear;
  chess::PropertyKind property = chess::PropertyKind::MaterialAdvantage;
  nn::Metrics train;
  nn::Metrics test;
  nn::Metrics train_majority;
  nn::Metrics test_majority;
  nn::Metrics train_all_positive;
  nn::Metrics test_all_positive;
  double train_label_proportion = 0.0;
  double test_label_proportion = 0.0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::size_t inputs = 0;
  std::size_t stopped_epoch = 0;
  std::size_t best_epoch = 0;
  double decision_threshold = nn::kDecisionThreshold;
  std::string loss = "binary_crossentropy";
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

struct ObserverRun {
  ObserverReport report;
  nn::Model model;
  std::vector<nn::EpochRecord> history;
};

/// Trains an observer of `kind` on `train` (validation split drawn inside
/// fit) and evaluates on `test`. Constant training labels are reported as a
/// warning, not an error.
ObserverRun train_observer(ObserverKind kind, const object::SnapshotDataset& train,
                           const object::SnapshotDataset& test, const nn::TrainConfig& config, std::uint64_t seed,
                           const nn::EpochCallback& on_epoch = {});

/// Hash of the training configuration fields that influence a run.
std::string config_hash(const nn::TrainConfig& config);

std::string report_json(const ObserverReport& report);
ObserverReport report_from_json(std::string_view json);

/// Table with one row per report:
/// model,property,train_accuracy,test_accuracy,train_f1,test_f1.
std::string results_table_csv(std::span<const ObserverReport> reports);

}  // namespace denot::observer
