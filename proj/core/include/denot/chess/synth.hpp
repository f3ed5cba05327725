#pragma once

#include <cstdint>
#include <vector>

#include "denot/chess/board.hpp"

namespace denot::chess {

/// Parameters for the seeded self-play generator used when no game corpus is
/// available. Moves are sampled from a softmax over a one-ply heuristic
/// (material swing, piece-square tables, check bonus) at `temperature`
/// (in pawns).
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t games = 100;
  int max_plies = 160;
  double temperature = 0.35;
};

/// Generates complete legal games. Each game stops at mate, stalemate, bare
/// kings, a 50-move stretch without capture or pawn move, or max_plies.
std::vector<Game> generate_games(const SynthConfig& config);

}  // namespace denot::chess
