#include <gtest/gtest.h>

#include <numeric>

#include "denot/denotation.hpp"

using namespace denot;
using denotation::Family;
using denotation::Measure;
using denotation::Position;
using denotation::Silhouette;

namespace {

// Sparse non-negative activations (about 40% zeros); label = activation 3 > 0.
object::SnapshotDataset sparse(std::size_t rows, std::uint64_t seed) {
  util::Rng rng(seed);
  object::SnapshotDataset ds;
  ds.activations.resize(384, static_cast<Eigen::Index>(rows));
  for (Eigen::Index i = 0; i < ds.activations.size(); ++i)
    ds.activations.data()[i] = std::max(0.0, rng.uniform(-0.4, 0.6));
  for (std::size_t i = 0; i < rows; ++i) {
    ds.labels.push_back(ds.activations(3, static_cast<Eigen::Index>(i)) > 0.0);
    ds.board_ids.push_back(static_cast<std::uint32_t>(i));
  }
  ds.columns.resize(384);
  std::iota(ds.columns.begin(), ds.columns.end(), 0);
  return ds;
}

denotation::AssessConfig quick(std::uint64_t seed = 1) {
  denotation::AssessConfig cfg;
  cfg.train.batch_size = 32;
  cfg.train.max_epochs = 40;
  cfg.train.adam.learning_rate = 0.02;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(Silhouette, CanonicalOrderAndErrors) {
  const Silhouette s({{2, 5}, {0, 9}, {2, 5}, {1, 0}});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.positions().front(), (Position{0, 9}));
  EXPECT_EQ(s.flat(), (std::vector<int>{9, 128, 261}));
  EXPECT_EQ(s.to_string(), "0:9 1:0 2:5");
  EXPECT_THROW(Silhouette({}), std::invalid_argument);
  EXPECT_THROW(Silhouette({{3, 0}}), std::invalid_argument);
  EXPECT_THROW(Silhouette({{0, 128}}), std::invalid_argument);
  EXPECT_THROW(Silhouette({{-1, 0}}), std::invalid_argument);
}

TEST(Silhouette, Parse) {
  EXPECT_TRUE(Silhouette::parse("all").is_full());
  EXPECT_EQ(Silhouette::parse("all").to_string(), "all");
  EXPECT_EQ(Silhouette::parse("1:17,2:90"), Silhouette({{1, 17}, {2, 90}}));
  EXPECT_EQ(Silhouette::parse("2:90 1:17"), Silhouette({{1, 17}, {2, 90}}));
  EXPECT_EQ(Silhouette::parse(Silhouette::single(0, 4).to_string()), Silhouette::single(0, 4));
  EXPECT_THROW(Silhouette::parse(""), std::invalid_argument);
  EXPECT_THROW(Silhouette::parse("1-17"), std::invalid_argument);
  EXPECT_THROW(Silhouette::parse("1:999"), std::invalid_argument);
}

TEST(Restrict, FullSingletonAndNested) {
  const auto ds = sparse(50, 1);
  const auto full = denotation::restrict(ds, Silhouette::full());
  EXPECT_EQ(full.activations, ds.activations);
  EXPECT_EQ(full.labels, ds.labels);

  const auto one = denotation::restrict(ds, Silhouette::single(1, 7));
  EXPECT_EQ(one.activations.rows(), 1);
  EXPECT_EQ(one.columns, (std::vector<int>{135}));
  EXPECT_EQ(one.activations.row(0), ds.activations.row(135));
  EXPECT_EQ(one.board_ids, ds.board_ids);

  const Silhouette outer({{0, 1}, {1, 7}, {2, 100}}), inner({{1, 7}, {2, 100}});
  const auto twice = denotation::restrict(denotation::restrict(ds, outer), inner);
  const auto once = denotation::restrict(ds, inner);
  EXPECT_EQ(twice.activations, once.activations);
  EXPECT_EQ(twice.columns, once.columns);
  EXPECT_THROW(denotation::restrict(once, outer), std::invalid_argument);
}

TEST(AndGate, Examples) {
  std::vector<double> snap(384, 0.0);
  const Silhouette pair({{0, 0}, {2, 1}});
  EXPECT_EQ(denotation::and_gate_predict(snap, pair), 0);
  snap[0] = 0.5;
  snap[257] = 1.2;
  EXPECT_EQ(denotation::and_gate_predict(snap, pair), 1);
  snap[257] = 0.0;
  EXPECT_EQ(denotation::and_gate_predict(snap, pair), 0);
  snap[257] = 0.3;
  EXPECT_EQ(denotation::and_gate_predict(snap, pair, 0.4), 0);
}

TEST(AndGate, MatchesBruteForceOnThousandRows) {
  const auto ds = sparse(1000, 2);
  for (const auto& text : {"0:3", "0:3 0:4", "0:1 1:2 2:3", "1:64 1:65 1:66 1:67"}) {
    const auto sil = Silhouette::parse(text);
    const auto fast = denotation::and_gate_predict(denotation::restrict(ds, sil), sil);
    for (std::size_t r = 0; r < ds.rows(); ++r) {
      int expect = 1;
      for (int f : sil.flat()) expect &= ds.activations(f, static_cast<Eigen::Index>(r)) > 0.0;
      ASSERT_EQ(fast[r], expect) << text << " row " << r;
    }
  }
}

TEST(AndGate, NestedSilhouettesShrinkAcceptedSet) {
  const auto ds = sparse(1000, 3);
  const Silhouette small({{0, 3}}), big({{0, 3}, {1, 10}, {2, 20}});
  const auto a = denotation::and_gate_predict(ds, small);
  const auto b = denotation::and_gate_predict(ds, big);
  for (std::size_t r = 0; r < ds.rows(); ++r)
    if (b[r]) EXPECT_EQ(a[r], 1);
}

TEST(Assess, ThresholdZeroAccuracyAlwaysDenotes) {
  const auto train = sparse(300, 4), test = sparse(100, 5);
  const auto r = denotation::assess_denotation(train, test, Silhouette::single(2, 9), Family::AndGate, 0.0,
                                               Measure::Accuracy);
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.performance, r.test.accuracy);
}

TEST(Assess, AndGateOnTheDefiningNeuronIsPerfect) {
  const auto train = sparse(300, 6), test = sparse(200, 7);
  const auto r = denotation::assess_denotation(train, test, Silhouette::single(0, 3), Family::AndGate, 0.99,
                                               Measure::F1);
  EXPECT_EQ(r.test.f1, 1.0);
  EXPECT_TRUE(r.verdict);
  const double p = r.test_label_proportion;
  EXPECT_NEAR(r.all_positive_f1, 2 * p / (1 + p), 1e-12);
}

TEST(Assess, LinearSingletonIsMonotoneThreshold) {
  const auto train = sparse(600, 8), test = sparse(300, 9);
  const auto sil = Silhouette::single(0, 3);
  const auto r = denotation::assess_denotation(train, test, sil, Family::Linear, 0.9, Measure::F1, quick());
  EXPECT_GT(r.test.f1, 0.9);
  EXPECT_EQ(r.silhouette, sil);
}

TEST(Assess, ConvNeedsFullGeometry) {
  const auto ds = sparse(100, 10);
  EXPECT_THROW(denotation::assess_denotation(ds, ds, Silhouette::single(0, 0), Family::Conv, 0.5, Measure::F1),
               std::invalid_argument);
  EXPECT_THROW(denotation::assess_denotation(ds, ds.slice(0, 0), Silhouette::full(), Family::Linear, 0.5, Measure::F1,
                                             quick()),
               std::invalid_argument);
}

TEST(Assess, VerdictIsPureFunctionOfPerformance) {
  EXPECT_TRUE(denotation::denotes(0.86, 0.86));
  EXPECT_FALSE(denotation::denotes(0.8599, 0.86));
  EXPECT_TRUE(denotation::denotes(0.0, 0.0));
}

TEST(TopWeight, SortOracleExample) {
  analysis::HeatMap map{nn::Matrix::Zero(3, 128), chess::PropertyKind::MaterialAdvantage, ""};
  map.grid(0, 0) = 3;
  map.grid(0, 1) = -5;
  map.grid(0, 2) = 1;
  EXPECT_EQ(denotation::top_weight_silhouette(map, 2), Silhouette({{0, 1}, {0, 0}}));
  EXPECT_EQ(denotation::top_weight_silhouette(map, 1), Silhouette::single(0, 1));
  EXPECT_TRUE(denotation::top_weight_silhouette(map, 384).is_full());
  EXPECT_THROW(denotation::top_weight_silhouette(map, 385), std::invalid_argument);
  EXPECT_THROW(denotation::top_weight_silhouette(map, 0), std::invalid_argument);
}

TEST(TopWeight, TiesGoToSmallerPosition) {
  analysis::HeatMap map{nn::Matrix::Zero(3, 128), chess::PropertyKind::MaterialAdvantage, ""};
  map.grid(2, 5) = 1.0;
  map.grid(1, 9) = -1.0;
  EXPECT_EQ(denotation::top_weight_silhouette(map, 1), Silhouette::single(1, 9));
}

TEST(Result, JsonRoundTripAndLedger) {
  const auto ds = sparse(200, 11);
  const auto r = denotation::assess_denotation(ds, ds, Silhouette::parse("0:3 1:4"), Family::AndGate, 0.5,
                                               Measure::F1);
  const auto back = denotation::result_from_json(denotation::result_json(r));
  EXPECT_EQ(back.silhouette, r.silhouette);
  EXPECT_EQ(back.family, r.family);
  EXPECT_EQ(back.performance, r.performance);
  EXPECT_EQ(back.verdict, r.verdict);
  const std::vector<denotation::DenotationResult> rs{r};
  const auto csv = denotation::ledger_csv(rs);
  EXPECT_EQ(csv.rfind("silhouette,family,property,measure,performance,t,verdict\n", 0), 0u);
  EXPECT_NE(csv.find("0:3 1:4,and_gate,material_advantage,f1"), std::string::npos);
  for (auto f : {Family::AndGate, Family::Linear, Family::Mlp, Family::Conv})
    EXPECT_EQ(denotation::family_from_name(denotation::family_name(f)), f);
  EXPECT_EQ(denotation::measure_from_name("accuracy"), Measure::Accuracy);
}
