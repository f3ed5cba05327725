#include "denot/chess/encoding.hpp"

namespace denot::chess {

BoardTensor encode_board(const Board& board) {
  if (board.side_to_move() != Color::White) throw BoardError("encode_board expects a normalized board (white to move)");
  BoardTensor t;
  for (Square s = 0; s < 64; ++s) {
    const auto& p = board.at(s);
    if (!p) continue;
    t.values[static_cast<std::size_t>(BoardTensor::index(static_cast<int>(p->kind), rank_of(s), file_of(s)))] =
        p->color == Color::White ? 1 : -1;
  }
  return t;
}

MoveRecord normalize_move(const Board& board, const MoveRecord& move) {
  if (board.side_to_move() == Color::White) return move;
  auto flip = [](Square s) { return make_square(7 - rank_of(s), file_of(s)); };
  return MoveRecord{flip(move.from), flip(move.to), move.promotion};
}

}  // namespace denot::chess
