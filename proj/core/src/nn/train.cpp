#include "denot/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "denot/util/rng.hpp"

namespace denot::nn {

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features.resize(features.rows(), static_cast<Eigen::Index>(indices.size()));
  out.labels.resize(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.features.col(static_cast<Eigen::Index>(k)) = features.col(static_cast<Eigen::Index>(indices[k]));
    out.labels[k] = labels[indices[k]];
  }
  return out;
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  if (early_stopping) {
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
      throw std::invalid_argument("validation_fraction must lie strictly between 0 and 1 with early stopping");
  } else if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("validation_fraction must lie in [0, 1)");
  }
  if (!(adam.learning_rate > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) ||
      !(adam.epsilon > 0.0))
    throw std::invalid_argument("invalid Adam hyperparameters");
}

namespace {

void gather(const Dataset& data, std::span<const std::size_t> idx, Matrix& x, std::vector<int>& y) {
  x.resize(data.features.rows(), static_cast<Eigen::Index>(idx.size()));
  y.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    x.col(static_cast<Eigen::Index>(k)) = data.features.col(static_cast<Eigen::Index>(idx[k]));
    y[k] = data.labels[idx[k]];
  }
}

double subset_loss(const Model& model, const Dataset& data, std::span<const std::size_t> idx, LossKind kind) {
  constexpr std::size_t kChunk = 512;
  Matrix x;
  std::vector<int> y;
  double total = 0.0;
  for (std::size_t start = 0; start < idx.size(); start += kChunk) {
    const auto part = idx.subspan(start, std::min(kChunk, idx.size() - start));
    gather(data, part, x, y);
    total += batch_loss(kind, forward_batch(model, x), y) * static_cast<double>(part.size());
  }
  return idx.empty() ? std::numeric_limits<double>::quiet_NaN() : total / static_cast<double>(idx.size());
}

}  // namespace

FitResult fit(Model model, const Dataset& data, const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  const std::size_t n = data.size();
  if (static_cast<std::size_t>(data.features.cols()) != n) throw ShapeError("dataset feature/label count mismatch");
  if (n < config.batch_size)
    throw std::invalid_argument("dataset of " + std::to_string(n) + " examples is smaller than one batch (" +
                                std::to_string(config.batch_size) + ")");
  const LossKind kind = loss_for(model);

  util::Rng rng(config.rng_seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  auto val_count = static_cast<std::size_t>(std::llround(static_cast<double>(n) * config.validation_fraction));
  if (config.validation_fraction > 0.0) val_count = std::clamp<std::size_t>(val_count, 1, n - 1);
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(val_count));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(val_count), order.end());

  std::vector<double> class_weight;
  if (config.balance_classes && kind == LossKind::BinaryCrossEntropy) {
    std::size_t pos = 0;
    for (auto i : train) pos += data.labels[i] != 0;
    const double total = static_cast<double>(train.size());
    class_weight = {pos == train.size() ? 1.0 : total / (2.0 * static_cast<double>(train.size() - pos)),
                    pos == 0 ? 1.0 : total / (2.0 * static_cast<double>(pos))};
  }

  FitResult result;
  result.model = model;
  AdamState state = AdamState::for_model(model);
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  Matrix x;
  std::vector<int> y;
  std::vector<double> w;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(train));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < train.size(); start += config.batch_size) {
      const auto batch = std::span<const std::size_t>(train).subspan(start, std::min(config.batch_size, train.size() - start));
      gather(data, batch, x, y);
      if (!class_weight.empty()) {
        w.resize(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) w[k] = class_weight[y[k] != 0];
      }
      double batch_loss_value = 0.0;
      const Gradients grads = backward(model, x, y, kind, &batch_loss_value, w);
      adam_update(model, grads, state, config.adam);
      loss_sum += batch_loss_value * static_cast<double>(batch.size());
    }
    EpochRecord rec{epoch, loss_sum / static_cast<double>(train.size()), subset_loss(model, data, val, kind)};
    result.history.push_back(rec);
    result.stopped_epoch = epoch;
    if (on_epoch) on_epoch(rec);

    if (!config.early_stopping || val.empty()) {
      result.model = model;
      result.best_epoch = epoch;
      continue;
    }
    if (rec.val_loss < best_val) {
      best_val = rec.val_loss;
      since_best = 0;
      result.model = model;
      result.best_epoch = epoch;
    } else if (++since_best >= config.early_stopping_patience) {
      break;
    }
  }
  return result;
}

std::vector<int> predict(const Model& model, const Matrix& features, std::size_t chunk) {
  const bool binary = layer_activation(model.layers().back()) == Activation::Sigmoid && model.output_size() == 1;
  std::vector<int> out(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index start = 0; start < features.cols(); start += static_cast<Eigen::Index>(chunk)) {
    const Eigen::Index len = std::min<Eigen::Index>(static_cast<Eigen::Index>(chunk), features.cols() - start);
    const Matrix probs = forward_batch(model, features.middleCols(start, len));
    for (Eigen::Index j = 0; j < len; ++j) {
      Eigen::Index arg = 0;
      if (binary) arg = probs(0, j) > kDecisionThreshold ? 1 : 0;
      else probs.col(j).maxCoeff(&arg);
      out[static_cast<std::size_t>(start + j)] = static_cast<int>(arg);
    }
  }
  return out;
}

Metrics evaluate(const Model& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
  const auto predicted = predict(model, data.features);
  const bool binary = layer_activation(model.layers().back()) == Activation::Sigmoid && model.output_size() == 1;
  if (binary) return binary_metrics(predicted, data.labels);
  Metrics m;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == data.labels[i];
  m.accuracy = static_cast<double>(correct) / static_cast<double>(predicted.size());
  return m;
}

double dataset_loss(const Model& model, const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return subset_loss(model, data, all, loss_for(model));
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,val_loss\n";
  for (const auto& r : history) out << r.epoch << ',' << r.train_loss << ',' << r.val_loss << '\n';
  return out.str();
}

}  // namespace denot::nn
