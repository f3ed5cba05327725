#include "denot/chess/position_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "denot/util/binary_io.hpp"

namespace denot::chess {

bool PositionRecord::label(PropertyKind kind) const noexcept {
  switch (kind) {
    case PropertyKind::MaterialAdvantage: return material_advantage;
    case PropertyKind::WhiteInCheck: return white_in_check;
    case PropertyKind::InsufficientMaterial: return insufficient_material;
  }
  return false;
}

PositionRecord make_record(const Board& board, const MoveRecord* move, std::uint32_t game_id) {
  const Board normalized = normalize_to_white(board);
  PositionRecord r;
  r.tensor = encode_board(normalized);
  if (move) r.from_square = static_cast<std::uint8_t>(from_square_label(normalize_move(board, *move)));
  r.material_advantage = material_advantage_label(normalized);
  r.white_in_check = in_check_label(normalized);
  r.insufficient_material = insufficient_material_label(normalized);
  r.game_id = game_id;
  return r;
}

std::vector<PositionRecord> records_from_games(std::span<const Game> games, std::size_t* illegal_moves) {
  std::vector<PositionRecord> out;
  for (std::size_t g = 0; g < games.size(); ++g) {
    for (const auto& [board, move] : derive_positions(games[g], illegal_moves))
      out.push_back(make_record(board, &move, static_cast<std::uint32_t>(g)));
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'D', 'N', 'P', 'C'};

std::uint8_t label_bits(const PositionRecord& r) {
  return static_cast<std::uint8_t>((r.material_advantage ? 1 : 0) | (r.white_in_check ? 2 : 0) |
                                   (r.insufficient_material ? 4 : 0));
}

}  // namespace

void write_cache(const std::filesystem::path& path, const PositionCache& cache) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write position cache: " + path.string());
  util::BinaryWriter w(out);
  w.bytes(kMagic, 4);
  w.u32(PositionCache::kFormatVersion);
  w.string(cache.source_hash);
  w.u64(cache.records.size());
  for (const auto& r : cache.records) {
    w.bytes(reinterpret_cast<const char*>(r.tensor.values.data()), r.tensor.values.size());
    w.u8(r.from_square);
    w.u8(label_bits(r));
    w.u32(r.game_id);
  }
  if (!out) throw std::runtime_error("failed writing position cache: " + path.string());
}

PositionCache read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open position cache: " + path.string());
  util::BinaryReader r(in, path.string());
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a position cache: " + path.string());
  const auto version = r.u32();
  if (version != PositionCache::kFormatVersion)
    throw std::runtime_error("unsupported position cache version " + std::to_string(version));
  PositionCache cache;
  cache.source_hash = r.string();
  const auto n = r.u64();
  cache.records.resize(n);
  for (auto& rec : cache.records) {
    r.bytes(reinterpret_cast<char*>(rec.tensor.values.data()), rec.tensor.values.size());
    rec.from_square = r.u8();
    const auto bits = r.u8();
    rec.material_advantage = bits & 1;
    rec.white_in_check = bits & 2;
    rec.insufficient_material = bits & 4;
    rec.game_id = r.u32();
  }
  return cache;
}

void write_cache_csv(const std::filesystem::path& path, const PositionCache& cache) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write position CSV: " + path.string());
  out << "# denot-position-cache v" << PositionCache::kFormatVersion << " source=" << cache.source_hash << '\n';
  out << "game_id,from_square,material_advantage,white_in_check,insufficient_material";
  for (int i = 0; i < kBoardTensorSize; ++i) out << ",x" << i;
  out << '\n';
  for (const auto& r : cache.records) {
    out << r.game_id << ',' << int(r.from_square) << ',' << int(r.material_advantage) << ','
        << int(r.white_in_check) << ',' << int(r.insufficient_material);
    for (auto v : r.tensor.values) out << ',' << int(v);
    out << '\n';
  }
}

PositionCache read_cache_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open position CSV: " + path.string());
  PositionCache cache;
  std::string line;
  std::getline(in, line);
  const std::string prefix = "# denot-position-cache v" + std::to_string(PositionCache::kFormatVersion) + " source=";
  if (line.rfind(prefix, 0) != 0) throw std::runtime_error("missing or unsupported position CSV header: " + path.string());
  cache.source_hash = line.substr(prefix.size());
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::array<long, 5 + kBoardTensorSize> cells{};
    std::size_t i = 0;
    while (std::getline(row, cell, ',') && i < cells.size()) cells[i++] = std::stol(cell);
    if (i != cells.size()) throw std::runtime_error("short row in position CSV: " + path.string());
    PositionRecord r;
    r.game_id = static_cast<std::uint32_t>(cells[0]);
    r.from_square = static_cast<std::uint8_t>(cells[1]);
    r.material_advantage = cells[2] != 0;
    r.white_in_check = cells[3] != 0;
    r.insufficient_material = cells[4] != 0;
    for (int k = 0; k < kBoardTensorSize; ++k) r.tensor.values[static_cast<std::size_t>(k)] = static_cast<std::int8_t>(cells[5 + static_cast<std::size_t>(k)]);
    cache.records.push_back(r);
  }
  return cache;
}

}  // namespace denot::chess
