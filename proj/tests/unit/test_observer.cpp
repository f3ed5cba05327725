#include <gtest/gtest.h>

#include <numeric>

#include "denot/observer.hpp"

using namespace denot;
using observer::ObserverKind;

namespace {

// Random non-negative activations over the full geometry; the label is 1
// when activation 7 exceeds 0.5.
object::SnapshotDataset synthetic(std::size_t rows, std::uint64_t seed, bool constant = false) {
  util::Rng rng(seed);
  object::SnapshotDataset ds;
  ds.activations.resize(384, static_cast<Eigen::Index>(rows));
  for (Eigen::Index c = 0; c < ds.activations.cols(); ++c)
    for (Eigen::Index r = 0; r < 384; ++r) ds.activations(r, c) = std::max(0.0, rng.uniform(-0.5, 1.0));
  for (std::size_t i = 0; i < rows; ++i) {
    ds.labels.push_back(constant ? 0 : ds.activations(7, static_cast<Eigen::Index>(i)) > 0.5);
    ds.board_ids.push_back(static_cast<std::uint32_t>(i));
  }
  ds.columns.resize(384);
  std::iota(ds.columns.begin(), ds.columns.end(), 0);
  return ds;
}

nn::TrainConfig quick() {
  nn::TrainConfig cfg;
  cfg.batch_size = 32;
  cfg.max_epochs = 30;
  return cfg;
}

}  // namespace

TEST(Observer, ParameterCounts) {
  EXPECT_EQ(observer::build_observer(ObserverKind::Linear, 1).parameter_count(), 385u);
  EXPECT_EQ(observer::build_observer(ObserverKind::Mlp, 1).parameter_count(),
            384u * 256 + 256 + 256 * 256 + 256 + 256 * 256 + 256 + 256 + 1);
  const auto conv = observer::build_observer(ObserverKind::Conv, 1);
  const auto& first = std::get<nn::ConvLayer>(conv.layers()[0]);
  EXPECT_EQ(first.kernel.size() + first.bias.size(), 320);
  EXPECT_EQ(first.height, 3);
  EXPECT_EQ(first.width, 128);
  EXPECT_EQ(conv.input_size(), 384u);
  EXPECT_EQ(observer::build_observer(ObserverKind::Linear, 1, 2).parameter_count(), 3u);
}

TEST(Observer, ConvImageIsTheLayerMajorVector) {
  util::Rng rng(1);
  auto c = nn::make_conv(1, 1, 3, 128, 3, nn::Activation::Identity, rng);
  c.kernel.setZero();
  c.kernel(0, 4) = 1.0;  // centre tap
  c.bias.setZero();
  const nn::Model m({c}, {});
  std::vector<double> x(384);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  EXPECT_EQ(nn::forward_with_recording(m, nn::Tensor::vector(x)).output.values, x);
}

TEST(Observer, LabelProportion) {
  EXPECT_EQ(observer::label_proportion(std::vector<int>{1, 0, 1, 1}), 0.75);
  EXPECT_EQ(observer::label_proportion(std::vector<int>{0, 0, 0}), 0.0);
  EXPECT_THROW(observer::label_proportion(std::vector<int>{}), std::invalid_argument);
}

TEST(Observer, NamesRoundTrip) {
  for (auto k : observer::kAllObservers) EXPECT_EQ(observer::observer_from_name(observer::observer_name(k)), k);
  EXPECT_THROW(observer::observer_from_name("tree"), std::invalid_argument);
}

TEST(Observer, LinearLearnsThresholdRuleWithBaselines) {
  // Enough rows that 383 noise features cannot be memorized.
  const auto train = synthetic(5000, 1), test = synthetic(200, 2);
  auto cfg = quick();
  cfg.adam.learning_rate = 0.01;
  const auto run = observer::train_observer(ObserverKind::Linear, train, test, cfg, 7);
  EXPECT_GT(run.report.test.accuracy, 0.9);
  EXPECT_EQ(run.report.test_all_positive.confusion.fp + run.report.test_all_positive.confusion.tp, 200u);
  EXPECT_EQ(run.report.test_label_proportion, observer::label_proportion(test.labels));
  EXPECT_TRUE(run.report.warnings.empty());
}

TEST(Observer, ConstantLabelsWarnInsteadOfFailing) {
  const auto train = synthetic(200, 3, true), test = synthetic(100, 4, true);
  const auto run = observer::train_observer(ObserverKind::Linear, train, test, quick(), 1);
  EXPECT_EQ(run.report.test.f1, 0.0);
  ASSERT_FALSE(run.report.warnings.empty());
  EXPECT_NE(run.report.warnings[0].find("constant"), std::string::npos);
}

TEST(Observer, SeededRunsAreIdentical) {
  const auto train = synthetic(300, 5), test = synthetic(100, 6);
  for (auto kind : {ObserverKind::Linear, ObserverKind::Mlp}) {
    const auto a = observer::train_observer(kind, train, test, quick(), 9);
    const auto b = observer::train_observer(kind, train, test, quick(), 9);
    EXPECT_TRUE(a.model == b.model);
    EXPECT_EQ(observer::report_json(a.report), observer::report_json(b.report));
  }
}

TEST(Observer, ConvRejectsPartialInputs) {
  auto train = synthetic(100, 5);
  train.activations.conservativeResize(10, Eigen::NoChange);
  train.columns.resize(10);
  EXPECT_THROW(observer::train_observer(ObserverKind::Conv, train, train, quick(), 1), std::invalid_argument);
}

TEST(Observer, ReportJsonRoundTripAndTable) {
  const auto train = synthetic(200, 7), test = synthetic(100, 8);
  const auto run = observer::train_observer(ObserverKind::Linear, train, test, quick(), 3);
  const auto back = observer::report_from_json(observer::report_json(run.report));
  EXPECT_EQ(observer::report_json(back), observer::report_json(run.report));
  const std::vector<observer::ObserverReport> reports{run.report};
  const auto csv = observer::results_table_csv(reports);
  EXPECT_EQ(csv.rfind("model,property,train_accuracy,test_accuracy,train_f1,test_f1", 0), 0u);
  EXPECT_NE(csv.find("linear,material_advantage"), std::string::npos);
}
