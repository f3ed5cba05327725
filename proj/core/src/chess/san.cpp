#include "denot/chess/san.hpp"

#include <cctype>
#include <cstdlib>

#include "denot/chess/movegen.hpp"

namespace denot::chess {

std::optional<MoveRecord> parse_san(const Board& board, std::string_view san) {
  std::string tok(san);
  while (!tok.empty() && (tok.back() == '+' || tok.back() == '#' || tok.back() == '!' || tok.back() == '?')) tok.pop_back();
  if (tok.empty()) return std::nullopt;

  const auto moves = legal_moves(board);
  const Color us = board.side_to_move();
  const int home = us == Color::White ? 0 : 7;

  if (tok == "O-O" || tok == "0-0" || tok == "O-O-O" || tok == "0-0-0") {
    const bool long_side = tok.size() == 5;
    const MoveRecord castle{make_square(home, 4), make_square(home, long_side ? 2 : 6), std::nullopt};
    for (const auto& m : moves) {
      const auto& p = board.at(m.from);
      if (m == castle && p && p->kind == PieceKind::King) return m;
    }
    return std::nullopt;
  }

  std::optional<PieceKind> promotion;
  if (const auto eq = tok.find('='); eq != std::string::npos) {
    if (eq + 1 >= tok.size()) return std::nullopt;
    promotion = piece_kind_from_letter(static_cast<char>(std::toupper(static_cast<unsigned char>(tok[eq + 1]))));
    if (!promotion || *promotion == PieceKind::King || *promotion == PieceKind::Pawn) return std::nullopt;
    tok.erase(eq);
  } else if (tok.size() >= 3 && std::isupper(static_cast<unsigned char>(tok.back())) &&
             std::islower(static_cast<unsigned char>(tok.front()))) {
    // "e8Q" form without '='
    promotion = piece_kind_from_letter(tok.back());
    if (!promotion) return std::nullopt;
    tok.pop_back();
  }

  PieceKind kind = PieceKind::Pawn;
  std::size_t pos = 0;
  if (std::isupper(static_cast<unsigned char>(tok[0]))) {
    const auto k = piece_kind_from_letter(tok[0]);
    if (!k || *k == PieceKind::Pawn) return std::nullopt;
    kind = *k;
    pos = 1;
  }
  if (tok.size() < pos + 2) return std::nullopt;
  const auto target = parse_square(std::string_view(tok).substr(tok.size() - 2));
  if (!target) return std::nullopt;

  int from_file = -1, from_rank = -1;
  for (std::size_t i = pos; i + 2 < tok.size(); ++i) {
    const char c = tok[i];
    if (c == 'x' || c == '-' || c == ':') continue;
    if (c >= 'a' && c <= 'h') from_file = c - 'a';
    else if (c >= '1' && c <= '8') from_rank = c - '1';
    else return std::nullopt;
  }

  std::optional<MoveRecord> found;
  for (const auto& m : moves) {
    const auto& p = board.at(m.from);
    if (!p || p->kind != kind || m.to != *target) continue;
    if (from_file >= 0 && file_of(m.from) != from_file) continue;
    if (from_rank >= 0 && rank_of(m.from) != from_rank) continue;
    if (m.promotion != promotion) continue;
    if (found) return std::nullopt;  // ambiguous
    found = m;
  }
  return found;
}

std::string to_san(const Board& board, const MoveRecord& move) {
  const Piece mover = *board.at(move.from);
  std::string out;
  const bool castle = mover.kind == PieceKind::King && std::abs(file_of(move.to) - file_of(move.from)) == 2;
  if (castle) {
    out = file_of(move.to) == 6 ? "O-O" : "O-O-O";
  } else {
    const bool capture = board.at(move.to).has_value() ||
                         (mover.kind == PieceKind::Pawn && file_of(move.from) != file_of(move.to));
    if (mover.kind == PieceKind::Pawn) {
      if (capture) out.push_back(static_cast<char>('a' + file_of(move.from)));
    } else {
      out.push_back(piece_letter(mover.kind));
      bool clash = false, same_file = false, same_rank = false;
      for (const auto& m : legal_moves(board)) {
        if (m.to != move.to || m.from == move.from) continue;
        const auto& p = board.at(m.from);
        if (!p || p->kind != mover.kind) continue;
        clash = true;
        same_file |= file_of(m.from) == file_of(move.from);
        same_rank |= rank_of(m.from) == rank_of(move.from);
      }
      if (clash) {
        if (!same_file) out.push_back(static_cast<char>('a' + file_of(move.from)));
        else if (!same_rank) out.push_back(static_cast<char>('1' + rank_of(move.from)));
        else out += square_name(move.from);
      }
    }
    if (capture) out.push_back('x');
    out += square_name(move.to);
    if (move.promotion) {
      out.push_back('=');
      out.push_back(piece_letter(*move.promotion));
    }
  }
  const Board next = apply_move(board, move);
  if (in_check(next, next.side_to_move())) out.push_back(legal_moves(next).empty() ? '#' : '+');
  return out;
}

}  // namespace denot::chess
