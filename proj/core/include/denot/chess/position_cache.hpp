#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "denot/chess/encoding.hpp"
#include "denot/chess/labels.hpp"
#include "denot/chess/pgn.hpp"

namespace denot::chess {

inline constexpr std::uint8_t kNoMove = 255;

/// One normalized, encoded and fully labeled position.
struct PositionRecord {
  BoardTensor tensor;
  std::uint8_t from_square = kNoMove;  // kNoMove for unlabeled FEN positions
  bool material_advantage = false;
  bool white_in_check = false;
  bool insufficient_material = false;
  std::uint32_t game_id = 0;

  bool label(PropertyKind kind) const noexcept;
  bool has_move() const noexcept { return from_square != kNoMove; }
  friend bool operator==(const PositionRecord&, const PositionRecord&) = default;
};

/// Normalizes, encodes and labels a board (and optionally its next move).
PositionRecord make_record(const Board& board, const MoveRecord* move, std::uint32_t game_id);

/// Every position of every game (terminal positions are excluded since they
/// have no next move). Game ids are the indices into `games`.
std::vector<PositionRecord> records_from_games(std::span<const Game> games, std::size_t* illegal_moves = nullptr);

struct PositionCache {
  static constexpr std::uint32_t kFormatVersion = 1;
  std::string source_hash;  // hash of the ingested inputs and limits
  std::vector<PositionRecord> records;
};

/// Binary layout: "DNPC" magic, u32 version, u32 hash length, hash bytes,
/// u64 record count, then per record 384 int8 tensor entries, u8 from square,
/// u8 label bits (material, check, insufficient), u32 game id. Little endian.
void write_cache(const std::filesystem::path& path, const PositionCache& cache);
PositionCache read_cache(const std::filesystem::path& path);  // throws std::runtime_error

/// CSV: a "# denot-position-cache v1 source=<hash>" line, a header row, then
/// game_id, from_square, the three labels and the 384 tensor entries.
void write_cache_csv(const std::filesystem::path& path, const PositionCache& cache);
PositionCache read_cache_csv(const std::filesystem::path& path);

}  // namespace denot::chess
