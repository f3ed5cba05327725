#pragma once

#include <cstdint>

#include "denot/nn/model.hpp"

namespace denot::nn {

struct AdamHyper {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

struct AdamState {
  std::vector<ParamBlock> m;
  std::vector<ParamBlock> v;
  std::uint64_t step = 0;

  static AdamState for_model(const Model& model);
};

/// One bias-corrected Adam step applied in place to `model`.
void adam_update(Model& model, const Gradients& grads, AdamState& state, const AdamHyper& hyper);

}  // namespace denot::nn
