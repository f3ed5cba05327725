#pragma once

// Layer forward/backward kernels shared by inference and training.

#include "denot/nn/model.hpp"

namespace denot::nn::detail {

void apply_activation(Activation a, Matrix& z);

/// z = layer(x) before activation, one example per column.
void layer_linear(const Layer& layer, const Matrix& x, Matrix& z);

/// Given dL/dz for a layer (one column per example) and the layer input,
/// accumulates parameter gradients into `grad` and writes dL/dx into `dx`
/// when `dx` is non-null.
void layer_backward(const Layer& layer, const Matrix& x, const Matrix& dz, ParamBlock& grad, Matrix* dx);

}  // namespace denot::nn::detail
