#include "denot/nn/adam.hpp"

#include <cmath>

namespace denot::nn {

AdamState AdamState::for_model(const Model& model) {
  return AdamState{model.zero_blocks(), model.zero_blocks(), 0};
}

namespace {

template <typename P, typename G, typename S>
void step_block(P& param, const G& grad, S& m, S& v, double lr_t, const AdamHyper& h, double correction2) {
  m = h.beta1 * m + (1.0 - h.beta1) * grad;
  v = h.beta2 * v + (1.0 - h.beta2) * grad.cwiseProduct(grad);
  // p -= lr * m_hat / (sqrt(v_hat) + eps) with m_hat = m / c1, v_hat = v / c2
  param.array() -= lr_t * m.array() / ((v.array() / correction2).sqrt() + h.epsilon);
}

}  // namespace

void adam_update(Model& model, const Gradients& grads, AdamState& state, const AdamHyper& hyper) {
  if (grads.size() != model.layers().size() || state.m.size() != grads.size())
    throw ShapeError("adam_update: gradient/state layer count does not match the model");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(hyper.beta1, t);
  const double correction2 = 1.0 - std::pow(hyper.beta2, t);
  const double lr_t = hyper.learning_rate / correction1;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    step_block(model.weight(i), grads[i].weight, state.m[i].weight, state.v[i].weight, lr_t, hyper, correction2);
    step_block(model.bias(i), grads[i].bias, state.m[i].bias, state.v[i].bias, lr_t, hyper, correction2);
  }
}

}  // namespace denot::nn
