#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "denot/chess/labels.hpp"
#include "denot/chess/position_cache.hpp"
#include "denot/nn/train.hpp"

namespace denot::object {

/// The chess object network: 384 board features -> three ReLU layers of 128
/// -> 64-way softmax over from-squares, recording after each hidden layer.
struct ObjectSpec {
  std::size_t input_size = chess::kBoardTensorSize;
  std::vector<std::size_t> hidden = {128, 128, 128};
  std::size_t outputs = 64;
};

nn::Model build_object_model(const ObjectSpec& spec, std::uint64_t seed);

/// Board features as doubles, one column per record (plane-major order).
nn::Matrix board_features(std::span<const chess::PositionRecord> records);

/// Object training examples; records without a next move are dropped.
nn::Dataset object_dataset(std::span<const chess::PositionRecord> records);

struct GameSplit {
  std::vector<std::size_t> train;  // record indices, in original order
  std::vector<std::size_t> test;
};

/// Splits records by game id (never by position) with a seeded shuffle of
/// the distinct games; `test_fraction` of the games go to the test side.
GameSplit split_by_game(std::span<const chess::PositionRecord> records, double test_fraction, std::uint64_t seed);

struct ObjectTrainingResult {
  nn::FitResult fit;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t train_positions = 0;
  std::size_t test_positions = 0;
};

ObjectTrainingResult train_object(nn::Model model, std::span<const chess::PositionRecord> train,
                                  std::span<const chess::PositionRecord> test, const nn::TrainConfig& config,
                                  const nn::EpochCallback& on_epoch = {});

/// Recorded activations of a model, rows in recording order (layer-major),
/// one column per record.
nn::Matrix record_activations(const nn::Model& model, std::span<const chess::PositionRecord> records);

/// Activations restricted to a column subset plus one binary property label
/// per row. `columns[r]` is the flat (layer * width + neuron) position held
/// in activation row r; a freshly snapshotted dataset holds every position.
struct SnapshotDataset {
  static constexpr std::uint32_t kFormatVersion = 1;

  nn::Matrix activations;  // columns.size() x rows
  std::vector<int> labels;
  std::vector<std::uint32_t> board_ids;
  std::vector<int> columns;
  chess::PropertyKind property = chess::PropertyKind::MaterialAdvantage;
  std::string model_hash;

  std::size_t rows() const noexcept { return labels.size(); }
  double label_proportion() const;  // throws on empty
  nn::Dataset as_training_data() const { return nn::Dataset{activations, labels}; }
  SnapshotDataset slice(std::size_t begin, std::size_t end) const;
};

/// One row per record, in input order; labels from the chess oracles;
/// board ids are the given ids (or record positions when `board_ids` is empty).
SnapshotDataset snapshot_dataset(const nn::Model& model, std::span<const chess::PositionRecord> records,
                                 chess::PropertyKind property, std::span<const std::uint32_t> board_ids = {},
                                 std::string model_hash = {});

/// Labels precomputed activations (as returned by record_activations).
SnapshotDataset label_snapshots(const nn::Matrix& activations, std::span<const chess::PositionRecord> records,
                                chess::PropertyKind property, std::span<const std::uint32_t> board_ids = {},
                                std::string model_hash = {});

/// CSV: "# denot-snapshot v1 property=<name> model=<hash>", header
/// a<column>...,label,board_id, then rows with full-precision values.
void write_snapshot_csv(const std::filesystem::path& path, const SnapshotDataset& ds);
SnapshotDataset read_snapshot_csv(const std::filesystem::path& path);

/// Binary: "DNSS" magic, u32 version, property name, model hash, u32 column
/// count + i32 columns, u64 rows, then per row f64 activations, u8 label,
/// u32 board id.
void write_snapshot_binary(const std::filesystem::path& path, const SnapshotDataset& ds);
SnapshotDataset read_snapshot_binary(const std::filesystem::path& path);

}  // namespace denot::object
