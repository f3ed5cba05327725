#include "denot/chess/board.hpp"

#include <cctype>
#include <sstream>

namespace denot::chess {

std::string square_name(Square s) {
  std::string out(2, ' ');
  out[0] = static_cast<char>('a' + file_of(s));
  out[1] = static_cast<char>('1' + rank_of(s));
  return out;
}

std::optional<Square> parse_square(std::string_view name) {
  if (name.size() != 2) return std::nullopt;
  const int file = name[0] - 'a';
  const int rank = name[1] - '1';
  if (!on_board(rank, file)) return std::nullopt;
  return make_square(rank, file);
}

char piece_letter(PieceKind kind) {
  static constexpr char kLetters[] = {'P', 'N', 'B', 'R', 'Q', 'K'};
  return kLetters[static_cast<int>(kind)];
}

std::optional<PieceKind> piece_kind_from_letter(char upper) {
  switch (upper) {
    case 'P': return PieceKind::Pawn;
    case 'N': return PieceKind::Knight;
    case 'B': return PieceKind::Bishop;
    case 'R': return PieceKind::Rook;
    case 'Q': return PieceKind::Queen;
    case 'K': return PieceKind::King;
    default: return std::nullopt;
  }
}

std::string to_uci(const MoveRecord& m) {
  std::string out = square_name(m.from) + square_name(m.to);
  if (m.promotion) out.push_back(static_cast<char>(std::tolower(piece_letter(*m.promotion))));
  return out;
}

Board Board::initial() {
  return from_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

Board Board::from_fen(std::string_view fen) {
  std::istringstream in{std::string(fen)};
  std::string placement, side, castling, ep;
  in >> placement >> side;
  if (placement.empty() || side.empty()) throw BoardError("FEN needs at least placement and side to move: '" + std::string(fen) + "'");
  if (!(in >> castling)) castling = "-";
  if (!(in >> ep)) ep = "-";

  Board b;
  int rank = 7, file = 0;
  for (char c : placement) {
    if (c == '/') {
      if (file != 8) throw BoardError("FEN rank has wrong width");
      --rank;
      file = 0;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      file += c - '0';
      if (file > 8) throw BoardError("FEN rank overflows");
      continue;
    }
    const auto kind = piece_kind_from_letter(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (!kind || !on_board(rank, file)) throw BoardError(std::string("bad FEN placement character '") + c + "'");
    const Color color = std::isupper(static_cast<unsigned char>(c)) ? Color::White : Color::Black;
    b.set(make_square(rank, file), Piece{*kind, color});
    ++file;
  }
  if (rank != 0 || file != 8) throw BoardError("FEN placement does not cover 8 ranks");

  if (side == "w") b.side_to_move_ = Color::White;
  else if (side == "b") b.side_to_move_ = Color::Black;
  else throw BoardError("FEN side to move must be 'w' or 'b'");

  if (castling != "-") {
    for (char c : castling) {
      switch (c) {
        case 'K': b.castling_.white_king_side = true; break;
        case 'Q': b.castling_.white_queen_side = true; break;
        case 'k': b.castling_.black_king_side = true; break;
        case 'q': b.castling_.black_queen_side = true; break;
        default: throw BoardError(std::string("bad FEN castling flag '") + c + "'");
      }
    }
  }
  if (ep != "-") {
    const auto sq = parse_square(ep);
    if (!sq) throw BoardError("bad FEN en-passant square '" + ep + "'");
    b.en_passant_ = *sq;
  }
  b.validate();
  return b;
}

std::string Board::to_fen() const {
  std::string out;
  for (int rank = 7; rank >= 0; --rank) {
    int empty = 0;
    for (int file = 0; file < 8; ++file) {
      const auto& p = at(make_square(rank, file));
      if (!p) {
        ++empty;
        continue;
      }
      if (empty) out.push_back(static_cast<char>('0' + empty));
      empty = 0;
      const char letter = piece_letter(p->kind);
      out.push_back(p->color == Color::White ? letter : static_cast<char>(std::tolower(letter)));
    }
    if (empty) out.push_back(static_cast<char>('0' + empty));
    if (rank) out.push_back('/');
  }
  out += side_to_move_ == Color::White ? " w " : " b ";
  std::string flags;
  if (castling_.white_king_side) flags += 'K';
  if (castling_.white_queen_side) flags += 'Q';
  if (castling_.black_king_side) flags += 'k';
  if (castling_.black_queen_side) flags += 'q';
  out += flags.empty() ? "-" : flags;
  out += ' ';
  out += en_passant_ ? square_name(*en_passant_) : "-";
  out += " 0 1";
  return out;
}

std::optional<Square> Board::king_square(Color c) const {
  for (Square s = 0; s < 64; ++s) {
    const auto& p = at(s);
    if (p && p->kind == PieceKind::King && p->color == c) return s;
  }
  return std::nullopt;
}

int Board::piece_count() const {
  int n = 0;
  for (const auto& p : squares_) n += p.has_value();
  return n;
}

void Board::validate() const {
  int kings[2] = {0, 0};
  for (Square s = 0; s < 64; ++s) {
    const auto& p = at(s);
    if (!p) continue;
    if (p->kind == PieceKind::King) ++kings[static_cast<int>(p->color)];
    if (p->kind == PieceKind::Pawn && (rank_of(s) == 0 || rank_of(s) == 7))
      throw BoardError("pawn on back rank at " + square_name(s));
  }
  if (kings[0] != 1 || kings[1] != 1) throw BoardError("board must hold exactly one king per color");
  if (en_passant_ && rank_of(*en_passant_) != 2 && rank_of(*en_passant_) != 5)
    throw BoardError("en-passant square must lie on rank 3 or 6");
}

bool Board::is_valid() const noexcept {
  try {
    validate();
    return true;
  } catch (const BoardError&) {
    return false;
  }
}

Board reflect_and_swap(const Board& board) {
  Board out;
  for (Square s = 0; s < 64; ++s) {
    const auto& p = board.at(s);
    if (!p) continue;
    out.set(make_square(7 - rank_of(s), file_of(s)), Piece{p->kind, opposite(p->color)});
  }
  out.set_side_to_move(opposite(board.side_to_move()));
  const auto& c = board.castling();
  out.castling() = CastlingRights{c.black_king_side, c.black_queen_side, c.white_king_side, c.white_queen_side};
  if (const auto ep = board.en_passant()) out.set_en_passant(make_square(7 - rank_of(*ep), file_of(*ep)));
  return out;
}

Board normalize_to_white(const Board& board) {
  if (board.side_to_move() == Color::White) return board;
  return reflect_and_swap(board);
}

}  // namespace denot::chess
