#include <gtest/gtest.h>

#include <set>

#include "denot/chess/synth.hpp"
#include "denot/object_model.hpp"
#include "test_util.hpp"

using namespace denot;
using chess::PropertyKind;

namespace {

const std::vector<chess::PositionRecord>& sample_records() {
  static const auto records = chess::records_from_games(chess::generate_games({.seed = 12, .games = 12}));
  return records;
}

}  // namespace

TEST(ObjectModel, ParameterCountAndSeeding) {
  const auto a = object::build_object_model({}, 5);
  EXPECT_EQ(a.parameter_count(), 90560u);
  EXPECT_EQ(a.input_size(), 384u);
  EXPECT_EQ(a.output_size(), 64u);
  EXPECT_EQ(a.recorded_width(), 384u);
  EXPECT_TRUE(a == object::build_object_model({}, 5));
  EXPECT_FALSE(a == object::build_object_model({}, 6));
}

TEST(ObjectModel, OutputIsDistribution) {
  const auto m = object::build_object_model({}, 1);
  const auto x = object::board_features(sample_records());
  const nn::Matrix p = nn::forward_batch(m, x);
  for (Eigen::Index c = 0; c < p.cols(); ++c) EXPECT_NEAR(p.col(c).sum(), 1.0, 1e-9);
}

TEST(ObjectModel, FeaturesArePlaneMajor) {
  const auto& r = sample_records()[0];
  const auto x = object::board_features(std::span(&r, 1));
  for (int i = 0; i < chess::kBoardTensorSize; ++i) EXPECT_EQ(x(i, 0), r.tensor.values[static_cast<std::size_t>(i)]);
}

TEST(ObjectModel, SplitIsByGameAndSeeded) {
  const auto& recs = sample_records();
  const auto s = object::split_by_game(recs, 0.25, 3);
  EXPECT_EQ(s.train.size() + s.test.size(), recs.size());
  std::set<std::uint32_t> train_games, test_games;
  for (auto i : s.train) train_games.insert(recs[i].game_id);
  for (auto i : s.test) test_games.insert(recs[i].game_id);
  for (auto g : test_games) EXPECT_FALSE(train_games.count(g));
  EXPECT_EQ(test_games.size(), 3u);  // a quarter of 12 games
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  const auto again = object::split_by_game(recs, 0.25, 3);
  EXPECT_EQ(again.test, s.test);
}

TEST(ObjectModel, HundredBoardMemorization) {
  std::vector<chess::PositionRecord> boards(sample_records().begin(), sample_records().begin() + 100);
  nn::TrainConfig cfg;
  cfg.max_epochs = 500;
  cfg.early_stopping = false;
  cfg.validation_fraction = 0.0;
  cfg.batch_size = 32;
  const auto r = object::train_object(object::build_object_model({}, 1), boards, boards, cfg);
  EXPECT_GE(r.train_accuracy, 0.95);
}

TEST(Snapshot, ZeroModelGivesZeroActivations) {
  auto m = object::build_object_model({}, 1);
  for (std::size_t l = 0; l < m.layers().size(); ++l) {
    m.weight(l).setZero();
    m.bias(l).setZero();
  }
  const auto acts = object::record_activations(m, sample_records());
  EXPECT_EQ(acts.rows(), 384);
  EXPECT_EQ(acts.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Snapshot, RowsEqualForwardWithRecording) {
  const auto m = object::build_object_model({}, 4);
  const auto& recs = sample_records();
  const auto ds = object::snapshot_dataset(m, recs, PropertyKind::MaterialAdvantage);
  ASSERT_EQ(ds.rows(), recs.size());
  for (std::size_t i = 0; i < recs.size(); i += 37) {
    const auto x = object::board_features(std::span(&recs[i], 1));
    const auto r = nn::forward_with_recording(m, nn::Tensor({384}, std::vector<double>(x.data(), x.data() + 384)));
    for (int layer = 0; layer < 3; ++layer)
      for (int n = 0; n < 128; ++n)
        EXPECT_NEAR(ds.activations(layer * 128 + n, static_cast<Eigen::Index>(i)),
                    r.snapshot.layers[static_cast<std::size_t>(layer)][static_cast<std::size_t>(n)], 1e-12);
    EXPECT_EQ(ds.labels[i], recs[i].material_advantage);
    EXPECT_EQ(ds.board_ids[i], i);
  }
  double mean = 0.0;
  for (int l : ds.labels) mean += l;
  EXPECT_EQ(ds.label_proportion(), mean / static_cast<double>(ds.rows()));
}

TEST(Snapshot, ObjectDatasetDropsUnlabeledBoards) {
  auto recs = sample_records();
  recs.push_back(chess::make_record(chess::Board::initial(), nullptr, 0));
  EXPECT_EQ(object::object_dataset(recs).size(), recs.size() - 1);
}

TEST(Snapshot, CsvAndBinaryRoundTrip) {
  const auto m = object::build_object_model({}, 2);
  const auto ds = object::snapshot_dataset(m, sample_records(), PropertyKind::InsufficientMaterial, {}, "abcd");
  const auto dir = testutil::temp_dir("snap");
  for (bool binary : {false, true}) {
    const auto path = dir / (binary ? "s.dnss" : "s.csv");
    binary ? object::write_snapshot_binary(path, ds) : object::write_snapshot_csv(path, ds);
    const auto back = binary ? object::read_snapshot_binary(path) : object::read_snapshot_csv(path);
    EXPECT_EQ(back.activations, ds.activations);
    EXPECT_EQ(back.labels, ds.labels);
    EXPECT_EQ(back.board_ids, ds.board_ids);
    EXPECT_EQ(back.columns, ds.columns);
    EXPECT_EQ(back.property, ds.property);
    EXPECT_EQ(back.model_hash, "abcd");
  }
  std::filesystem::remove_all(dir);
}

TEST(Snapshot, SliceAndEmptyProportion) {
  const auto m = object::build_object_model({}, 2);
  const auto ds = object::snapshot_dataset(m, sample_records(), PropertyKind::WhiteInCheck);
  const auto s = ds.slice(10, 20);
  EXPECT_EQ(s.rows(), 10u);
  EXPECT_EQ(s.board_ids.front(), 10u);
  EXPECT_EQ(s.activations.col(0), ds.activations.col(10));
  EXPECT_THROW(ds.slice(5, 5).label_proportion(), std::invalid_argument);
}
