#include "denot/nn/metrics.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace denot::nn {

double f1_score(const Confusion& c) {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double accuracy(const Confusion& c) {
  const auto n = c.total();
  return n == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
}

double precision(const Confusion& c) {
  const auto d = c.tp + c.fp;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const Confusion& c) {
  const auto d = c.tp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

Confusion confusion_from(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size())
    throw std::invalid_argument("confusion_from: " + std::to_string(predicted.size()) + " predictions for " +
                                std::to_string(actual.size()) + " labels");
  Confusion c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0, a = actual[i] != 0;
    if (p && a) ++c.tp;
    else if (p) ++c.fp;
    else if (a) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics binary_metrics(std::span<const int> predicted, std::span<const int> actual) {
  Metrics m;
  m.binary = true;
  m.confusion = confusion_from(predicted, actual);
  m.accuracy = accuracy(m.confusion);
  m.f1 = f1_score(m.confusion);
  return m;
}

Metrics majority_baseline(std::span<const int> labels) {
  std::size_t positives = 0;
  for (int y : labels) positives += y != 0;
  const int majority = 2 * positives > labels.size() ? 1 : 0;
  const std::vector<int> predicted(labels.size(), majority);
  return binary_metrics(predicted, labels);
}

Metrics all_positive_baseline(std::span<const int> labels) {
  const std::vector<int> predicted(labels.size(), 1);
  return binary_metrics(predicted, labels);
}

}  // namespace denot::nn
