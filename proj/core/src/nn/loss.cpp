#include "denot/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "kernels.hpp"

namespace denot::nn {

std::string loss_name(LossKind kind) {
  return kind == LossKind::CategoricalCrossEntropy ? "categorical_crossentropy" : "binary_crossentropy";
}

namespace {

double clip(double p) { return std::clamp(p, kProbabilityClip, 1.0 - kProbabilityClip); }

}  // namespace

double loss(LossKind kind, std::span<const double> prediction, std::span<const double> target) {
  if (prediction.size() != target.size())
    throw ShapeError("loss: prediction has " + std::to_string(prediction.size()) + " values, target has " +
                     std::to_string(target.size()));
  if (kind == LossKind::BinaryCrossEntropy) {
    if (prediction.size() != 1) throw ShapeError("binary cross-entropy expects scalar prediction and target");
    const double p = clip(prediction[0]), t = target[0];
    return -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i)
    if (target[i] != 0.0) total -= target[i] * std::log(clip(prediction[i]));
  return total;
}

double loss(LossKind kind, const Tensor& prediction, const Tensor& target) {
  return loss(kind, std::span<const double>(prediction.values), std::span<const double>(target.values));
}

LossKind loss_for(const Model& model) {
  if (model.layers().empty()) throw ShapeError("empty model has no loss");
  const auto act = layer_activation(model.layers().back());
  if (act == Activation::Softmax) return LossKind::CategoricalCrossEntropy;
  if (act == Activation::Sigmoid && model.output_size() == 1) return LossKind::BinaryCrossEntropy;
  throw ShapeError("output layer must be softmax or a single sigmoid unit to train");
}

double batch_loss(LossKind kind, const Matrix& predictions, std::span<const int> labels) {
  if (static_cast<std::size_t>(predictions.cols()) != labels.size())
    throw ShapeError("batch_loss: " + std::to_string(predictions.cols()) + " predictions for " +
                     std::to_string(labels.size()) + " labels");
  double total = 0.0;
  for (Eigen::Index j = 0; j < predictions.cols(); ++j) {
    const int y = labels[static_cast<std::size_t>(j)];
    if (kind == LossKind::BinaryCrossEntropy) {
      const double p = clip(predictions(0, j));
      total -= y ? std::log(p) : std::log(1.0 - p);
    } else {
      total -= std::log(clip(predictions(y, j)));
    }
  }
  return labels.empty() ? 0.0 : total / static_cast<double>(labels.size());
}

Gradients backward(const Model& model, const Matrix& inputs, std::span<const int> labels, LossKind kind,
                   double* loss_out, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != labels.size()) throw ShapeError("backward: weights/labels length mismatch");
  if (static_cast<std::size_t>(inputs.cols()) != labels.size())
    throw ShapeError("backward: " + std::to_string(inputs.cols()) + " inputs for " + std::to_string(labels.size()) +
                     " labels");
  if (static_cast<std::size_t>(inputs.rows()) != model.input_size())
    throw ShapeError("backward: input has " + std::to_string(inputs.rows()) + " features, model expects " +
                     std::to_string(model.input_size()));
  if (loss_for(model) != kind) throw ShapeError("loss kind does not match the model's output layer");

  const auto& layers = model.layers();
  const std::size_t n = layers.size();
  std::vector<Matrix> acts(n + 1);
  acts[0] = inputs;
  for (std::size_t i = 0; i < n; ++i) {
    detail::layer_linear(layers[i], acts[i], acts[i + 1]);
    detail::apply_activation(layer_activation(layers[i]), acts[i + 1]);
  }
  if (loss_out) {
    if (weights.empty()) {
      *loss_out = batch_loss(kind, acts[n], labels);
    } else {
      double total = 0.0;
      for (Eigen::Index j = 0; j < acts[n].cols(); ++j) {
        const std::size_t k = static_cast<std::size_t>(j);
        total += weights[k] * batch_loss(kind, acts[n].col(j), labels.subspan(k, 1));
      }
      *loss_out = total / static_cast<double>(labels.size());
    }
  }

  const double scale = 1.0 / static_cast<double>(labels.size());
  Matrix delta = acts[n];
  for (Eigen::Index j = 0; j < delta.cols(); ++j) {
    const int y = labels[static_cast<std::size_t>(j)];
    if (kind == LossKind::BinaryCrossEntropy) delta(0, j) -= y;
    else delta(y, j) -= 1.0;
    if (!weights.empty()) delta.col(j) *= weights[static_cast<std::size_t>(j)];
  }
  delta *= scale;

  Gradients grads = model.zero_blocks();
  Matrix dx;
  for (std::size_t i = n; i-- > 0;) {
    detail::layer_backward(layers[i], acts[i], delta, grads[i], i > 0 ? &dx : nullptr);
    if (i == 0) break;
    switch (layer_activation(layers[i - 1])) {
      case Activation::Identity: break;
      case Activation::Relu: dx.array() *= (acts[i].array() > 0.0).cast<double>(); break;
      case Activation::Sigmoid: dx.array() *= acts[i].array() * (1.0 - acts[i].array()); break;
      case Activation::Softmax: {
        // d softmax: s * (g - <g, s>)
        for (Eigen::Index j = 0; j < dx.cols(); ++j) {
          const double dot = dx.col(j).dot(acts[i].col(j));
          dx.col(j).array() = acts[i].col(j).array() * (dx.col(j).array() - dot);
        }
        break;
      }
    }
    delta.swap(dx);
  }
  return grads;
}

}  // namespace denot::nn
