#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "denot/nn/loss.hpp"
#include "oracle/nn_oracle.hpp"

namespace oracle {

using denot::nn::Matrix;
using denot::nn::Model;

// Central differences with h = 1e-5. At h = 1e-4 a bias step can push a
// ReLU pre-activation across zero, which breaks the difference quotient, not
// the analytic gradient. Relative error uses a floor so that parameters with
// vanishing gradients compare on an absolute scale.
constexpr double kStep = 1e-5;
constexpr double kRelTol = 1e-4;
constexpr double kRelFloor = 1e-6;

struct Batch {
  std::vector<std::vector<double>> xs;
  std::vector<int> labels;
  Matrix matrix() const {
    Matrix m(static_cast<Eigen::Index>(xs[0].size()), static_cast<Eigen::Index>(xs.size()));
    for (std::size_t c = 0; c < xs.size(); ++c)
      for (std::size_t r = 0; r < xs[c].size(); ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = xs[c][r];
    return m;
  }
};

inline Batch random_batch(std::size_t n, std::size_t dim, int classes, std::uint64_t seed) {
  denot::util::Rng rng(seed);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    b.xs.push_back(x);
    b.labels.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(classes))));
  }
  return b;
}

inline void randomize_biases(Model& m, std::uint64_t seed) {
  denot::util::Rng rng(seed);
  for (std::size_t l = 0; l < m.layers().size(); ++l)
    for (Eigen::Index i = 0; i < m.bias(l).size(); ++i) m.bias(l)[i] = rng.uniform(-0.3, 0.3);
}

inline double worst_relative_error(const Model& m, const Batch& b) {
  const auto kind = denot::nn::loss_for(m);
  const auto analytic = denot::nn::backward(m, b.matrix(), b.labels, kind);
  const auto numeric =
      numeric_gradients(m, [&](const Model& probe) { return mean_loss(probe, b.xs, b.labels); }, kStep);
  double worst = 0.0;
  for (std::size_t l = 0; l < analytic.size(); ++l) {
    auto cmp = [&](const auto& a, const auto& n) {
      for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double denom = std::max({std::abs(a.data()[k]), std::abs(n.data()[k]), kRelFloor});
        worst = std::max(worst, std::abs(a.data()[k] - n.data()[k]) / denom);
      }
    };
    cmp(analytic[l].weight, numeric[l].weight);
    cmp(analytic[l].bias, numeric[l].bias);
  }
  return worst;
}

}  // namespace oracle
