#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "denot/chess/board.hpp"

namespace denot::chess {

struct PgnGame {
  Game game;
  std::map<std::string, std::string> tags;
};

struct PgnParseResult {
  std::vector<PgnGame> games;
  std::size_t skipped_games = 0;
  std::vector<std::string> warnings;
};

/// Parses PGN text. Mainline SAN moves are replayed from the initial position
/// (or the [FEN] tag when present). Comments, NAGs and variations are skipped.
/// Games with malformed headers or illegal/unparseable moves are dropped and
/// counted in `skipped_games`; parsing never throws on bad game data.
PgnParseResult parse_pgn(std::string_view text);
PgnParseResult parse_pgn(std::istream& in);

/// Writes a game as PGN movetext with the given tags.
std::string write_pgn(const Game& game, const std::map<std::string, std::string>& tags, std::string_view result = "*");

/// Board before each move paired with that move. Stops at the first illegal
/// move; `illegal_moves` (if given) is incremented in that case.
std::vector<std::pair<Board, MoveRecord>> derive_positions(const Game& game, std::size_t* illegal_moves = nullptr);

/// One FEN per line; blank lines and lines starting with '#' are ignored.
/// Invalid FENs are skipped and reported in `warnings`.
std::vector<Board> parse_fen_list(std::string_view text, std::vector<std::string>* warnings = nullptr);

}  // namespace denot::chess
