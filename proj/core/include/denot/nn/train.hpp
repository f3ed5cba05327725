#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "denot/nn/adam.hpp"
#include "denot/nn/loss.hpp"
#include "denot/nn/metrics.hpp"
#include "denot/nn/model.hpp"

namespace denot::nn {

/// Feature columns (one example per column) with integer labels: class
/// indices for categorical heads, 0/1 for binary heads.
struct Dataset {
  Matrix features;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  Dataset subset(std::span<const std::size_t> indices) const;
};

struct TrainConfig {
  std::size_t batch_size = 128;
  std::size_t max_epochs = 50;
  double validation_fraction = 0.2;
  bool early_stopping = true;
  std::size_t early_stopping_patience = 3;
  AdamHyper adam{};
  std::uint64_t rng_seed = 0;
  // Weight each binary class by n / (2 * count) in the loss. Off by default.
  bool balance_classes = false;

  /// Throws std::invalid_argument on inconsistent settings. With early
  /// stopping on, 0 < validation_fraction < 1 is required; with it off a
  /// fraction of 0 trains on every example.
  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;  // NaN when there is no validation split
};

struct FitResult {
  Model model;
  std::vector<EpochRecord> history;
  std::size_t stopped_epoch = 0;  // epochs actually run
  std::size_t best_epoch = 0;     // epoch whose parameters were returned (0 = initial)
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam training. The validation split is drawn once from
/// rng_seed; per-epoch shuffles come from the same stream. With early
/// stopping, training halts after `patience` epochs without a validation-loss
/// improvement and the best-validation parameters are returned. Identical
/// inputs give bit-identical results. Throws std::invalid_argument when the
/// dataset is smaller than one batch.
FitResult fit(Model model, const Dataset& data, const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Binary decision threshold on the sigmoid output: predict 1 iff p > 0.5.
inline constexpr double kDecisionThreshold = 0.5;

/// Predicted class per example (argmax for softmax, threshold for sigmoid).
std::vector<int> predict(const Model& model, const Matrix& features, std::size_t chunk = 512);

/// Accuracy for categorical heads; accuracy, F1 and confusion for binary heads.
Metrics evaluate(const Model& model, const Dataset& data);

/// Mean loss over a dataset, evaluated in chunks.
double dataset_loss(const Model& model, const Dataset& data);

/// CSV with header epoch,train_loss,val_loss.
std::string history_csv(const std::vector<EpochRecord>& history);

}  // namespace denot::nn
