#pragma once

#include <vector>

#include "denot/chess/board.hpp"

namespace denot::chess {

/// True when any piece of color `by` attacks square `s`. Sliding attacks are
/// blocked by any piece; en passant is not an attack on a square.
bool is_square_attacked(const Board& board, Square s, Color by);

/// True when the king of color `c` is attacked.
bool in_check(const Board& board, Color c);

/// Legal moves for the side to move.
std::vector<MoveRecord> legal_moves(const Board& board);

bool is_legal(const Board& board, const MoveRecord& move);

/// Applies a move assumed legal; updates castling rights and en-passant state.
Board apply_move(const Board& board, const MoveRecord& move);

}  // namespace denot::chess
