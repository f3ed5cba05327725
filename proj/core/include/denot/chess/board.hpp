#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace denot::chess {

enum class Color : std::uint8_t { White = 0, Black = 1 };

// Plane order of the board tensor follows this enumeration.
enum class PieceKind : std::uint8_t { Pawn = 0, Knight, Bishop, Rook, Queen, King };

inline constexpr int kNumPieceKinds = 6;

constexpr Color opposite(Color c) noexcept { return c == Color::White ? Color::Black : Color::White; }

struct Piece {
  PieceKind kind;
  Color color;
  friend bool operator==(const Piece&, const Piece&) = default;
};

// Square index = rank * 8 + file; rank 1 is row 0, file a is column 0.
using Square = int;

constexpr Square make_square(int rank, int file) noexcept { return rank * 8 + file; }
constexpr int rank_of(Square s) noexcept { return s / 8; }
constexpr int file_of(Square s) noexcept { return s % 8; }
constexpr bool on_board(int rank, int file) noexcept { return rank >= 0 && rank < 8 && file >= 0 && file < 8; }

std::string square_name(Square s);
std::optional<Square> parse_square(std::string_view name);

char piece_letter(PieceKind kind);  // upper-case SAN/FEN letter
std::optional<PieceKind> piece_kind_from_letter(char upper);

/// Error raised for structurally invalid boards or FEN strings.
class BoardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CastlingRights {
  bool white_king_side = false;
  bool white_queen_side = false;
  bool black_king_side = false;
  bool black_queen_side = false;
  friend bool operator==(const CastlingRights&, const CastlingRights&) = default;
};

/// Full chess position: placement, side to move, castling and en-passant state.
class Board {
 public:
  Board() = default;

  static Board initial();
  static Board from_fen(std::string_view fen);  // throws BoardError
  std::string to_fen() const;

  const std::optional<Piece>& at(Square s) const { return squares_[static_cast<std::size_t>(s)]; }
  void set(Square s, std::optional<Piece> p) { squares_[static_cast<std::size_t>(s)] = p; }
  void clear(Square s) { squares_[static_cast<std::size_t>(s)].reset(); }

  Color side_to_move() const noexcept { return side_to_move_; }
  void set_side_to_move(Color c) noexcept { side_to_move_ = c; }

  const CastlingRights& castling() const noexcept { return castling_; }
  CastlingRights& castling() noexcept { return castling_; }

  std::optional<Square> en_passant() const noexcept { return en_passant_; }
  void set_en_passant(std::optional<Square> s) noexcept { en_passant_ = s; }

  std::optional<Square> king_square(Color c) const;
  int piece_count() const;

  /// Throws BoardError when a structural invariant is broken (king count,
  /// back-rank pawns, en-passant rank).
  void validate() const;
  bool is_valid() const noexcept;

  friend bool operator==(const Board&, const Board&) = default;

 private:
  std::array<std::optional<Piece>, 64> squares_{};
  Color side_to_move_ = Color::White;
  CastlingRights castling_{};
  std::optional<Square> en_passant_{};
};

struct MoveRecord {
  Square from = 0;
  Square to = 0;
  std::optional<PieceKind> promotion{};
  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

std::string to_uci(const MoveRecord& m);

struct Game {
  Board initial = Board::initial();
  std::vector<MoveRecord> moves;
};

/// Mirror the board top to bottom and swap piece colors so that the side to
/// move becomes white. Boards with white to move are returned unchanged.
Board normalize_to_white(const Board& board);

/// Unconditional reflection + color swap (also flips side to move).
Board reflect_and_swap(const Board& board);

}  // namespace denot::chess
