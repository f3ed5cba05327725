#pragma once

#include <cstddef>
#include <span>

namespace denot::nn {

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  Confusion confusion{};  // zero for categorical tasks
  bool binary = false;
};

/// 2tp / (2tp + fp + fn), 0 when the denominator is 0.
double f1_score(const Confusion& c);
double accuracy(const Confusion& c);
double precision(const Confusion& c);
double recall(const Confusion& c);

Confusion confusion_from(std::span<const int> predicted, std::span<const int> actual);
Metrics binary_metrics(std::span<const int> predicted, std::span<const int> actual);

/// Majority-class and predict-all-positive baselines for binary labels.
Metrics majority_baseline(std::span<const int> labels);
Metrics all_positive_baseline(std::span<const int> labels);

}  // namespace denot::nn
