#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "denot/chess/board.hpp"

namespace denot::chess {

/// Resolves a SAN token ("Nbd7", "exd6", "O-O-O", "e8=Q+", ...) against the
/// legal moves of `board`. Returns nullopt when the token is malformed,
/// ambiguous or names no legal move.
std::optional<MoveRecord> parse_san(const Board& board, std::string_view san);

/// SAN for a legal move, with minimal disambiguation and check/mate suffix.
std::string to_san(const Board& board, const MoveRecord& move);

}  // namespace denot::chess
