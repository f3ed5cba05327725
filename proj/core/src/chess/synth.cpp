#include "denot/chess/synth.hpp"

#include <algorithm>
#include <cmath>

#include "denot/chess/labels.hpp"
#include "denot/chess/movegen.hpp"
#include "denot/util/rng.hpp"

namespace denot::chess {
namespace {

// Piece-square tables in centipawns from white's point of view, rank 8 first
// (the conventional printed orientation).
constexpr int kPst[6][64] = {
    {0,  0,  0,  0,   0,   0,  0,  0,  50, 50, 50,  50,  50,  50,  50, 50, 10, 10, 20, 30, 30, 20,
     10, 10, 5,  5,  10,  25,  25, 10, 5,  5,  0,  0,  0,   20,  20,  0,  0,  0,  5,  -5, -10, 0,
     0,  -10, -5, 5,  5,  10, 10, -20, -20, 10, 10, 5,  0,  0,  0,   0,   0,   0,  0,  0},
    {-50, -40, -30, -30, -30, -30, -40, -50, -40, -20, 0,   0,   0,   0,   -20, -40,
     -30, 0,   10,  15,  15,  10,  0,   -30, -30, 5,   15,  20,  20,  15,  5,   -30,
     -30, 0,   15,  20,  20,  15,  0,   -30, -30, 5,   10,  15,  15,  10,  5,   -30,
     -40, -20, 0,   5,   5,   0,   -20, -40, -50, -40, -30, -30, -30, -30, -40, -50},
    {-20, -10, -10, -10, -10, -10, -10, -20, -10, 0,   0,   0,   0,   0,   0,   -10,
     -10, 0,   5,   10,  10,  5,   0,   -10, -10, 5,   5,   10,  10,  5,   5,   -10,
     -10, 0,   10,  10,  10,  10,  0,   -10, -10, 10,  10,  10,  10,  10,  10,  -10,
     -10, 5,   0,   0,   0,   0,   5,   -10, -20, -10, -10, -10, -10, -10, -10, -20},
    {0,  0, 0, 0, 0, 0, 0, 0,  5,  10, 10, 10, 10, 10, 10, 5,  -5, 0, 0, 0, 0, 0,
     0,  -5, -5, 0, 0, 0, 0, 0, 0,  -5, -5, 0,  0,  0,  0,  0,  0,  -5, -5, 0, 0, 0,
     0,  0,  0,  -5, -5, 0, 0, 0, 0, 0, 0,  -5, 0,  0,  0,  5,  5,  0,  0,  0},
    {-20, -10, -10, -5, -5, -10, -10, -20, -10, 0,   0,   0,  0,  0,   0,   -10,
     -10, 0,   5,   5,  5,  5,   0,   -10, -5,  0,   5,   5,  5,  5,   0,   -5,
     0,   0,   5,   5,  5,  5,   0,   -5,  -10, 5,   5,   5,  5,  5,   0,   -10,
     -10, 0,   5,   0,  0,  0,   0,   -10, -20, -10, -10, -5, -5, -10, -10, -20},
    {-30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
     -30, -40, -40, -50, -50, -40, -40, -30, -30, -40, -40, -50, -50, -40, -40, -30,
     -20, -30, -30, -40, -40, -30, -30, -20, -10, -20, -20, -20, -20, -20, -20, -10,
     20,  20,  0,   0,   0,   0,   20,  20,  20,  30,  10,  0,   0,   10,  30,  20},
};

double pst(Piece p, Square s) {
  const int rank = p.color == Color::White ? rank_of(s) : 7 - rank_of(s);
  return kPst[static_cast<int>(p.kind)][(7 - rank) * 8 + file_of(s)] / 100.0;
}

bool bare_kings(const Board& b) {
  return b.piece_count() == 2;
}

double score_move(const Board& b, const MoveRecord& m) {
  const Piece mover = *b.at(m.from);
  double score = pst(Piece{m.promotion.value_or(mover.kind), mover.color}, m.to) - pst(mover, m.from);
  if (const auto& victim = b.at(m.to)) {
    score += piece_value(victim->kind) + pst(*victim, m.to);
  }
  if (m.promotion) score += piece_value(*m.promotion) - 1;
  const Board next = apply_move(b, m);
  const Color them = next.side_to_move();
  // Hanging the moved piece costs its value unless it is defended.
  if (is_square_attacked(next, m.to, them)) {
    const double value = piece_value(m.promotion.value_or(mover.kind));
    score -= is_square_attacked(next, m.to, mover.color) ? std::max(0.0, value - 3.0) * 0.5 : value;
  }
  if (in_check(next, them)) score += legal_moves(next).empty() ? 100.0 : 0.3;
  return score;
}

}  // namespace

std::vector<Game> generate_games(const SynthConfig& config) {
  util::Rng rng(config.seed);
  std::vector<Game> games;
  games.reserve(config.games);
  std::vector<double> weights;
  for (std::size_t g = 0; g < config.games; ++g) {
    Game game;
    Board b = game.initial;
    int quiet = 0;
    for (int ply = 0; ply < config.max_plies; ++ply) {
      const auto moves = legal_moves(b);
      if (moves.empty() || bare_kings(b) || quiet >= 100) break;
      weights.resize(moves.size());
      double best = -1e300;
      for (std::size_t i = 0; i < moves.size(); ++i) {
        weights[i] = score_move(b, moves[i]) / config.temperature;
        best = std::max(best, weights[i]);
      }
      double total = 0.0;
      for (auto& w : weights) total += (w = std::exp(w - best));
      double pick = rng.uniform() * total;
      std::size_t chosen = moves.size() - 1;
      for (std::size_t i = 0; i < moves.size(); ++i) {
        pick -= weights[i];
        if (pick < 0.0) {
          chosen = i;
          break;
        }
      }
      const auto& m = moves[chosen];
      const bool reset = b.at(m.to).has_value() || b.at(m.from)->kind == PieceKind::Pawn;
      quiet = reset ? 0 : quiet + 1;
      game.moves.push_back(m);
      b = apply_move(b, m);
    }
    games.push_back(std::move(game));
  }
  return games;
}

}  // namespace denot::chess
