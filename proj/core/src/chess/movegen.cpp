#include "denot/chess/movegen.hpp"

#include <cstdlib>

namespace denot::chess {
namespace {

struct Delta {
  int dr;
  int df;
};

constexpr Delta kKnight[] = {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
constexpr Delta kKing[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr Delta kDiagonal[] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
constexpr Delta kOrthogonal[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

constexpr PieceKind kPromotions[] = {PieceKind::Queen, PieceKind::Rook, PieceKind::Bishop, PieceKind::Knight};

bool holds(const Board& b, int rank, int file, Color c, PieceKind k) {
  if (!on_board(rank, file)) return false;
  const auto& p = b.at(make_square(rank, file));
  return p && p->color == c && p->kind == k;
}

bool slider_hits(const Board& b, int rank, int file, const Delta (&dirs)[4], Color by, PieceKind k1, PieceKind k2) {
  for (const auto& d : dirs) {
    int r = rank + d.dr, f = file + d.df;
    while (on_board(r, f)) {
      const auto& p = b.at(make_square(r, f));
      if (p) {
        if (p->color == by && (p->kind == k1 || p->kind == k2)) return true;
        break;
      }
      r += d.dr;
      f += d.df;
    }
  }
  return false;
}

void push_pawn_move(std::vector<MoveRecord>& out, Square from, Square to) {
  if (rank_of(to) == 7 || rank_of(to) == 0) {
    for (PieceKind k : kPromotions) out.push_back(MoveRecord{from, to, k});
  } else {
    out.push_back(MoveRecord{from, to, std::nullopt});
  }
}

void pseudo_moves(const Board& b, std::vector<MoveRecord>& out) {
  const Color us = b.side_to_move();
  const int forward = us == Color::White ? 1 : -1;
  const int start_rank = us == Color::White ? 1 : 6;

  for (Square s = 0; s < 64; ++s) {
    const auto& p = b.at(s);
    if (!p || p->color != us) continue;
    const int rank = rank_of(s), file = file_of(s);

    auto try_step = [&](int r, int f) {
      if (!on_board(r, f)) return;
      const auto& t = b.at(make_square(r, f));
      if (!t || t->color != us) out.push_back(MoveRecord{s, make_square(r, f), std::nullopt});
    };
    auto slide = [&](const Delta (&dirs)[4]) {
      for (const auto& d : dirs) {
        int r = rank + d.dr, f = file + d.df;
        while (on_board(r, f)) {
          const auto& t = b.at(make_square(r, f));
          if (t && t->color == us) break;
          out.push_back(MoveRecord{s, make_square(r, f), std::nullopt});
          if (t) break;
          r += d.dr;
          f += d.df;
        }
      }
    };

    switch (p->kind) {
      case PieceKind::Pawn: {
        const int r1 = rank + forward;
        if (on_board(r1, file) && !b.at(make_square(r1, file))) {
          push_pawn_move(out, s, make_square(r1, file));
          const int r2 = rank + 2 * forward;
          if (rank == start_rank && !b.at(make_square(r2, file))) out.push_back(MoveRecord{s, make_square(r2, file), std::nullopt});
        }
        for (int df : {-1, 1}) {
          const int f = file + df;
          if (!on_board(r1, f)) continue;
          const Square to = make_square(r1, f);
          const auto& t = b.at(to);
          if ((t && t->color != us) || (!t && b.en_passant() == to)) push_pawn_move(out, s, to);
        }
        break;
      }
      case PieceKind::Knight:
        for (const auto& d : kKnight) try_step(rank + d.dr, file + d.df);
        break;
      case PieceKind::Bishop:
        slide(kDiagonal);
        break;
      case PieceKind::Rook:
        slide(kOrthogonal);
        break;
      case PieceKind::Queen:
        slide(kDiagonal);
        slide(kOrthogonal);
        break;
      case PieceKind::King: {
        for (const auto& d : kKing) try_step(rank + d.dr, file + d.df);
        const int home = us == Color::White ? 0 : 7;
        if (s != make_square(home, 4)) break;
        const Color them = opposite(us);
        const auto& cr = b.castling();
        const bool king_side = us == Color::White ? cr.white_king_side : cr.black_king_side;
        const bool queen_side = us == Color::White ? cr.white_queen_side : cr.black_queen_side;
        if (is_square_attacked(b, s, them)) break;
        if (king_side && holds(b, home, 7, us, PieceKind::Rook) && !b.at(make_square(home, 5)) &&
            !b.at(make_square(home, 6)) && !is_square_attacked(b, make_square(home, 5), them))
          out.push_back(MoveRecord{s, make_square(home, 6), std::nullopt});
        if (queen_side && holds(b, home, 0, us, PieceKind::Rook) && !b.at(make_square(home, 3)) &&
            !b.at(make_square(home, 2)) && !b.at(make_square(home, 1)) &&
            !is_square_attacked(b, make_square(home, 3), them))
          out.push_back(MoveRecord{s, make_square(home, 2), std::nullopt});
        break;
      }
    }
  }
}

}  // namespace

bool is_square_attacked(const Board& b, Square s, Color by) {
  const int rank = rank_of(s), file = file_of(s);
  // A pawn of color `by` attacks from one rank behind (relative to its forward direction).
  const int pawn_rank = by == Color::White ? rank - 1 : rank + 1;
  if (holds(b, pawn_rank, file - 1, by, PieceKind::Pawn) || holds(b, pawn_rank, file + 1, by, PieceKind::Pawn)) return true;
  for (const auto& d : kKnight)
    if (holds(b, rank + d.dr, file + d.df, by, PieceKind::Knight)) return true;
  for (const auto& d : kKing)
    if (holds(b, rank + d.dr, file + d.df, by, PieceKind::King)) return true;
  if (slider_hits(b, rank, file, kDiagonal, by, PieceKind::Bishop, PieceKind::Queen)) return true;
  return slider_hits(b, rank, file, kOrthogonal, by, PieceKind::Rook, PieceKind::Queen);
}

bool in_check(const Board& b, Color c) {
  const auto k = b.king_square(c);
  return k && is_square_attacked(b, *k, opposite(c));
}

Board apply_move(const Board& b, const MoveRecord& m) {
  Board out = b;
  const Piece mover = *b.at(m.from);
  const Color us = mover.color;
  out.clear(m.from);

  if (mover.kind == PieceKind::Pawn && b.en_passant() == m.to && !b.at(m.to)) {
    out.clear(make_square(rank_of(m.from), file_of(m.to)));
  }
  if (mover.kind == PieceKind::King && std::abs(file_of(m.to) - file_of(m.from)) == 2) {
    const int home = rank_of(m.from);
    const bool king_side = file_of(m.to) == 6;
    const Square rook_from = make_square(home, king_side ? 7 : 0);
    const Square rook_to = make_square(home, king_side ? 5 : 3);
    out.set(rook_to, out.at(rook_from));
    out.clear(rook_from);
  }
  out.set(m.to, Piece{m.promotion.value_or(mover.kind), us});

  auto& cr = out.castling();
  auto touch = [&cr](Square s) {
    if (s == make_square(0, 4)) cr.white_king_side = cr.white_queen_side = false;
    if (s == make_square(7, 4)) cr.black_king_side = cr.black_queen_side = false;
    if (s == make_square(0, 0)) cr.white_queen_side = false;
    if (s == make_square(0, 7)) cr.white_king_side = false;
    if (s == make_square(7, 0)) cr.black_queen_side = false;
    if (s == make_square(7, 7)) cr.black_king_side = false;
  };
  touch(m.from);
  touch(m.to);

  out.set_en_passant(std::nullopt);
  if (mover.kind == PieceKind::Pawn && std::abs(rank_of(m.to) - rank_of(m.from)) == 2)
    out.set_en_passant(make_square((rank_of(m.to) + rank_of(m.from)) / 2, file_of(m.from)));
  out.set_side_to_move(opposite(us));
  return out;
}

std::vector<MoveRecord> legal_moves(const Board& b) {
  std::vector<MoveRecord> pseudo;
  pseudo.reserve(64);
  pseudo_moves(b, pseudo);
  std::vector<MoveRecord> out;
  out.reserve(pseudo.size());
  const Color us = b.side_to_move();
  for (const auto& m : pseudo) {
    if (!in_check(apply_move(b, m), us)) out.push_back(m);
  }
  return out;
}

bool is_legal(const Board& b, const MoveRecord& move) {
  for (const auto& m : legal_moves(b))
    if (m == move) return true;
  return false;
}

}  // namespace denot::chess
