#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "denot/chess/board.hpp"

namespace denot::chess {

inline constexpr int kBoardTensorSize = 8 * 8 * kNumPieceKinds;

/// 8x8x6 board features stored plane-major: index = plane * 64 + rank * 8 + file.
/// Entries are +1 (white), -1 (black) or 0.
struct BoardTensor {
  std::array<std::int8_t, kBoardTensorSize> values{};

  static constexpr int index(int plane, int rank, int file) noexcept { return plane * 64 + rank * 8 + file; }
  std::int8_t at(int plane, int rank, int file) const noexcept { return values[static_cast<std::size_t>(index(plane, rank, file))]; }
  friend bool operator==(const BoardTensor&, const BoardTensor&) = default;
};

/// Requires side_to_move == White (throws BoardError otherwise). Castling and
/// en-passant state are not encoded.
BoardTensor encode_board(const Board& board);

/// Mirror of normalize_to_white for a move played from `board`.
MoveRecord normalize_move(const Board& board, const MoveRecord& move);

}  // namespace denot::chess
