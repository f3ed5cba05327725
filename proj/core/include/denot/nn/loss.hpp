#pragma once

#include <span>
#include <string>

#include "denot/nn/model.hpp"

namespace denot::nn {

enum class LossKind { CategoricalCrossEntropy, BinaryCrossEntropy };

/// Probabilities are clamped to [kProbabilityClip, 1 - kProbabilityClip] before logs.
inline constexpr double kProbabilityClip = 1e-7;

std::string loss_name(LossKind kind);

/// categorical: -log p[target class] with a one-hot target;
/// binary: -[t log p + (1 - t) log(1 - p)] on scalars.
double loss(LossKind kind, std::span<const double> prediction, std::span<const double> target);
double loss(LossKind kind, const Tensor& prediction, const Tensor& target);

/// Loss implied by the model's output layer: softmax -> categorical,
/// single sigmoid unit -> binary. Other heads are not trainable here.
LossKind loss_for(const Model& model);

/// Mean loss over a batch; `labels` holds class indices (categorical) or 0/1.
double batch_loss(LossKind kind, const Matrix& predictions, std::span<const int> labels);

/// Mean-over-batch gradients of the loss w.r.t. every parameter. Uses the
/// fused output delta (p - target) for softmax/categorical and
/// sigmoid/binary heads. Returns the batch mean loss through `loss_out`.
/// Optional per-example `weights` scale each example's loss term.
Gradients backward(const Model& model, const Matrix& inputs, std::span<const int> labels, LossKind kind,
                   double* loss_out = nullptr, std::span<const double> weights = {});

}  // namespace denot::nn
