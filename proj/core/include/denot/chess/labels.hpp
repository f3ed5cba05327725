#pragma once

#include <array>
#include <string_view>

#include "denot/chess/board.hpp"

namespace denot::chess {

enum class PropertyKind { MaterialAdvantage, WhiteInCheck, InsufficientMaterial };

inline constexpr std::array<PropertyKind, 3> kAllProperties = {
    PropertyKind::MaterialAdvantage, PropertyKind::WhiteInCheck, PropertyKind::InsufficientMaterial};

std::string_view property_name(PropertyKind kind);
PropertyKind property_from_name(std::string_view name);  // throws std::invalid_argument

/// Standard piece weights: 1/3/3/5/9, king 0.
int piece_value(PieceKind kind);
int material(const Board& board, Color color);

// All labels read "white" literally; callers pass normalized boards so that
// white is the side to move.

/// 1 iff white's material strictly exceeds black's.
bool material_advantage_label(const Board& board);

/// 1 iff the white king is attacked by any black piece.
bool in_check_label(const Board& board);

/// Which lone-minor material sets count as unable to mate. The default is
/// {bare king, K+B, K+N}; `two_knights_insufficient` adds K+N+N.
struct InsufficientMaterialRule {
  bool two_knights_insufficient = false;
};

/// 1 iff white's non-king material cannot force mate under `rule`.
bool insufficient_material_label(const Board& board, InsufficientMaterialRule rule = {});

bool property_label(PropertyKind kind, const Board& board);

/// Row-major from-square index (rank * 8 + file).
int from_square_label(const MoveRecord& move);

}  // namespace denot::chess
