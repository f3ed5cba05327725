#include <benchmark/benchmark.h>

#include "denot/nn/adam.hpp"
#include "denot/nn/loss.hpp"
#include "denot/object_model.hpp"
#include "denot/observer.hpp"

using namespace denot;

namespace {

nn::Matrix random_inputs(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  util::Rng rng(seed);
  nn::Matrix x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = std::max(0.0, rng.uniform(-0.5, 1.0));
  return x;
}

std::vector<int> random_labels(std::size_t n, int classes, std::uint64_t seed) {
  util::Rng rng(seed);
  std::vector<int> y(n);
  for (int& v : y) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
  return y;
}

// Batch size as the argument; items/s counts examples.
void run_forward(benchmark::State& state, const nn::Model& m) {
  const auto n = state.range(0);
  const auto x = random_inputs(static_cast<Eigen::Index>(m.input_size()), n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward_batch(m, x));
  state.SetItemsProcessed(state.iterations() * n);
}

void run_train_step(benchmark::State& state, nn::Model m, int classes) {
  const auto n = state.range(0);
  const auto x = random_inputs(static_cast<Eigen::Index>(m.input_size()), n, 2);
  const auto y = random_labels(static_cast<std::size_t>(n), classes, 3);
  const auto kind = nn::loss_for(m);
  auto adam = nn::AdamState::for_model(m);
  for (auto _ : state) {
    const auto g = nn::backward(m, x, y, kind);
    nn::adam_update(m, g, adam, {});
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_ObjectForward(benchmark::State& state) { run_forward(state, object::build_object_model({}, 1)); }
BENCHMARK(BM_ObjectForward)->Arg(1)->Arg(128)->Arg(1024);

void BM_ObjectTrainStep(benchmark::State& state) { run_train_step(state, object::build_object_model({}, 1), 64); }
BENCHMARK(BM_ObjectTrainStep)->Arg(128);

void BM_MlpObserverTrainStep(benchmark::State& state) {
  run_train_step(state, observer::build_observer(observer::ObserverKind::Mlp, 1), 2);
}
BENCHMARK(BM_MlpObserverTrainStep)->Arg(128);

void BM_ConvObserverForward(benchmark::State& state) {
  run_forward(state, observer::build_observer(observer::ObserverKind::Conv, 1));
}
BENCHMARK(BM_ConvObserverForward)->Arg(1)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ConvObserverTrainStep(benchmark::State& state) {
  run_train_step(state, observer::build_observer(observer::ObserverKind::Conv, 1), 2);
}
BENCHMARK(BM_ConvObserverTrainStep)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
