#include "denot/object_model.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "denot/util/binary_io.hpp"
#include "denot/util/rng.hpp"

namespace denot::object {

nn::Model build_object_model(const ObjectSpec& spec, std::uint64_t seed) {
  util::Rng rng(seed);
  std::vector<nn::Layer> layers;
  std::vector<std::size_t> recording;
  std::size_t width = spec.input_size;
  for (std::size_t h : spec.hidden) {
    recording.push_back(layers.size());
    layers.emplace_back(nn::make_dense(width, h, nn::Activation::Relu, rng));
    width = h;
  }
  layers.emplace_back(nn::make_dense(width, spec.outputs, nn::Activation::Softmax, rng));
  return nn::Model(std::move(layers), std::move(recording));
}

nn::Matrix board_features(std::span<const chess::PositionRecord> records) {
  nn::Matrix x(chess::kBoardTensorSize, static_cast<Eigen::Index>(records.size()));
  for (std::size_t j = 0; j < records.size(); ++j)
    for (int i = 0; i < chess::kBoardTensorSize; ++i)
      x(i, static_cast<Eigen::Index>(j)) = records[j].tensor.values[static_cast<std::size_t>(i)];
  return x;
}

nn::Dataset object_dataset(std::span<const chess::PositionRecord> records) {
  std::vector<chess::PositionRecord> labeled;
  labeled.reserve(records.size());
  for (const auto& r : records)
    if (r.has_move()) labeled.push_back(r);
  nn::Dataset ds;
  ds.features = board_features(labeled);
  ds.labels.reserve(labeled.size());
  for (const auto& r : labeled) ds.labels.push_back(r.from_square);
  return ds;
}

GameSplit split_by_game(std::span<const chess::PositionRecord> records, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw std::invalid_argument("test_fraction must lie in (0, 1)");
  std::vector<std::uint32_t> games;
  for (const auto& r : records) games.push_back(r.game_id);
  std::sort(games.begin(), games.end());
  games.erase(std::unique(games.begin(), games.end()), games.end());
  util::Rng rng(seed);
  rng.shuffle(std::span<std::uint32_t>(games));
  const auto n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(games.size()) * test_fraction)));
  std::vector<std::uint32_t> test_games(games.begin(), games.begin() + static_cast<std::ptrdiff_t>(std::min(n_test, games.size())));
  std::sort(test_games.begin(), test_games.end());
  GameSplit split;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const bool is_test = std::binary_search(test_games.begin(), test_games.end(), records[i].game_id);
    (is_test ? split.test : split.train).push_back(i);
  }
  return split;
}

ObjectTrainingResult train_object(nn::Model model, std::span<const chess::PositionRecord> train,
                                  std::span<const chess::PositionRecord> test, const nn::TrainConfig& config,
                                  const nn::EpochCallback& on_epoch) {
  const nn::Dataset train_ds = object_dataset(train);
  ObjectTrainingResult result;
  result.train_positions = train_ds.size();
  result.fit = nn::fit(std::move(model), train_ds, config, on_epoch);
  result.train_accuracy = nn::evaluate(result.fit.model, train_ds).accuracy;
  const nn::Dataset test_ds = object_dataset(test);
  result.test_positions = test_ds.size();
  if (test_ds.size() > 0) result.test_accuracy = nn::evaluate(result.fit.model, test_ds).accuracy;
  return result;
}

nn::Matrix record_activations(const nn::Model& model, std::span<const chess::PositionRecord> records) {
  constexpr std::size_t kChunk = 1024;
  nn::Matrix out(static_cast<Eigen::Index>(model.recorded_width()), static_cast<Eigen::Index>(records.size()));
  nn::Matrix recorded;
  for (std::size_t start = 0; start < records.size(); start += kChunk) {
    const auto part = records.subspan(start, std::min(kChunk, records.size() - start));
    nn::forward_batch(model, board_features(part), &recorded);
    out.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(part.size())) = recorded;
  }
  return out;
}

double SnapshotDataset::label_proportion() const {
  if (labels.empty()) throw std::invalid_argument("label proportion of an empty dataset");
  std::size_t pos = 0;
  for (int y : labels) pos += y != 0;
  return static_cast<double>(pos) / static_cast<double>(labels.size());
}

SnapshotDataset SnapshotDataset::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows()) throw std::out_of_range("snapshot slice out of range");
  SnapshotDataset out;
  out.activations = activations.middleCols(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin));
  out.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(begin), labels.begin() + static_cast<std::ptrdiff_t>(end));
  out.board_ids.assign(board_ids.begin() + static_cast<std::ptrdiff_t>(begin), board_ids.begin() + static_cast<std::ptrdiff_t>(end));
  out.columns = columns;
  out.property = property;
  out.model_hash = model_hash;
  return out;
}

SnapshotDataset label_snapshots(const nn::Matrix& activations, std::span<const chess::PositionRecord> records,
                                chess::PropertyKind property, std::span<const std::uint32_t> board_ids,
                                std::string model_hash) {
  if (static_cast<std::size_t>(activations.cols()) != records.size())
    throw std::invalid_argument("activation columns do not match record count");
  if (!board_ids.empty() && board_ids.size() != records.size())
    throw std::invalid_argument("board id count does not match record count");
  SnapshotDataset ds;
  ds.activations = activations;
  ds.property = property;
  ds.model_hash = std::move(model_hash);
  ds.columns.resize(static_cast<std::size_t>(activations.rows()));
  std::iota(ds.columns.begin(), ds.columns.end(), 0);
  ds.labels.reserve(records.size());
  ds.board_ids.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ds.labels.push_back(records[i].label(property) ? 1 : 0);
    ds.board_ids.push_back(board_ids.empty() ? static_cast<std::uint32_t>(i) : board_ids[i]);
  }
  return ds;
}

SnapshotDataset snapshot_dataset(const nn::Model& model, std::span<const chess::PositionRecord> records,
                                 chess::PropertyKind property, std::span<const std::uint32_t> board_ids,
                                 std::string model_hash) {
  return label_snapshots(record_activations(model, records), records, property, board_ids, std::move(model_hash));
}

void write_snapshot_csv(const std::filesystem::path& path, const SnapshotDataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot CSV: " + path.string());
  out.precision(17);
  out << "# denot-snapshot v" << SnapshotDataset::kFormatVersion << " property=" << chess::property_name(ds.property)
      << " model=" << (ds.model_hash.empty() ? "-" : ds.model_hash) << '\n';
  for (int c : ds.columns) out << 'a' << c << ',';
  out << "label,board_id\n";
  for (std::size_t j = 0; j < ds.rows(); ++j) {
    for (Eigen::Index i = 0; i < ds.activations.rows(); ++i) out << ds.activations(i, static_cast<Eigen::Index>(j)) << ',';
    out << ds.labels[j] << ',' << ds.board_ids[j] << '\n';
  }
}

SnapshotDataset read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot CSV: " + path.string());
  std::string line;
  std::getline(in, line);
  std::istringstream meta(line);
  std::vector<std::string> tokens;
  for (std::string t; meta >> t;) tokens.push_back(t);
  if (tokens.size() != 5 || tokens[1] != "denot-snapshot" || tokens[2] != "v" + std::to_string(SnapshotDataset::kFormatVersion) ||
      tokens[3].rfind("property=", 0) != 0 || tokens[4].rfind("model=", 0) != 0)
    throw std::runtime_error("missing or unsupported snapshot CSV header: " + path.string());
  SnapshotDataset ds;
  ds.property = chess::property_from_name(tokens[3].substr(9));
  ds.model_hash = tokens[4].substr(6);
  if (ds.model_hash == "-") ds.model_hash.clear();

  std::getline(in, line);
  {
    std::istringstream header(line);
    for (std::string cell; std::getline(header, cell, ',');)
      if (!cell.empty() && cell[0] == 'a') ds.columns.push_back(std::stoi(cell.substr(1)));
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i < ds.columns.size(); ++i) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in snapshot CSV: " + path.string());
      values.push_back(std::stod(cell));
    }
    if (!std::getline(row, cell, ',')) throw std::runtime_error("missing label in snapshot CSV: " + path.string());
    ds.labels.push_back(std::stoi(cell));
    if (!std::getline(row, cell, ',')) throw std::runtime_error("missing board id in snapshot CSV: " + path.string());
    ds.board_ids.push_back(static_cast<std::uint32_t>(std::stoul(cell)));
  }
  ds.activations = Eigen::Map<nn::Matrix>(values.data(), static_cast<Eigen::Index>(ds.columns.size()),
                                          static_cast<Eigen::Index>(ds.labels.size()));
  return ds;
}

namespace {
constexpr char kSnapshotMagic[4] = {'D', 'N', 'S', 'S'};
}

void write_snapshot_binary(const std::filesystem::path& path, const SnapshotDataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot cache: " + path.string());
  util::BinaryWriter w(out);
  w.bytes(kSnapshotMagic, 4);
  w.u32(SnapshotDataset::kFormatVersion);
  w.string(std::string(chess::property_name(ds.property)));
  w.string(ds.model_hash);
  w.u32(static_cast<std::uint32_t>(ds.columns.size()));
  for (int c : ds.columns) w.u32(static_cast<std::uint32_t>(c));
  w.u64(ds.rows());
  for (std::size_t j = 0; j < ds.rows(); ++j) {
    w.bytes(reinterpret_cast<const char*>(ds.activations.col(static_cast<Eigen::Index>(j)).data()),
            ds.columns.size() * sizeof(double));
    w.u8(static_cast<std::uint8_t>(ds.labels[j]));
    w.u32(ds.board_ids[j]);
  }
}

SnapshotDataset read_snapshot_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot cache: " + path.string());
  util::BinaryReader r(in, path.string());
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kSnapshotMagic, 4) != 0) throw std::runtime_error("not a snapshot cache: " + path.string());
  if (r.u32() != SnapshotDataset::kFormatVersion) throw std::runtime_error("unsupported snapshot cache version");
  SnapshotDataset ds;
  ds.property = chess::property_from_name(r.string());
  ds.model_hash = r.string();
  ds.columns.resize(r.u32());
  for (auto& c : ds.columns) c = static_cast<int>(r.u32());
  const auto rows = r.u64();
  ds.activations.resize(static_cast<Eigen::Index>(ds.columns.size()), static_cast<Eigen::Index>(rows));
  ds.labels.resize(rows);
  ds.board_ids.resize(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    r.bytes(reinterpret_cast<char*>(ds.activations.col(static_cast<Eigen::Index>(j)).data()), ds.columns.size() * sizeof(double));
    ds.labels[j] = r.u8();
    ds.board_ids[j] = r.u32();
  }
  return ds;
}

}  // namespace denot::object
