#include "denot/chess/labels.hpp"

#include <stdexcept>
#include <string>

#include "denot/chess/movegen.hpp"

namespace denot::chess {

std::string_view property_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::MaterialAdvantage: return "material_advantage";
    case PropertyKind::WhiteInCheck: return "white_in_check";
    case PropertyKind::InsufficientMaterial: return "insufficient_material";
  }
  return "unknown";
}

PropertyKind property_from_name(std::string_view name) {
  for (PropertyKind k : kAllProperties)
    if (property_name(k) == name) return k;
  throw std::invalid_argument("unknown property '" + std::string(name) + "'");
}

int piece_value(PieceKind kind) {
  static constexpr int kValues[] = {1, 3, 3, 5, 9, 0};
  return kValues[static_cast<int>(kind)];
}

int material(const Board& board, Color color) {
  int sum = 0;
  for (Square s = 0; s < 64; ++s) {
    const auto& p = board.at(s);
    if (p && p->color == color) sum += piece_value(p->kind);
  }
  return sum;
}

bool material_advantage_label(const Board& board) {
  return material(board, Color::White) > material(board, Color::Black);
}

bool in_check_label(const Board& board) { return in_check(board, Color::White); }

bool insufficient_material_label(const Board& board, InsufficientMaterialRule rule) {
  int counts[kNumPieceKinds] = {};
  for (Square s = 0; s < 64; ++s) {
    const auto& p = board.at(s);
    if (p && p->color == Color::White && p->kind != PieceKind::King) ++counts[static_cast<int>(p->kind)];
  }
  const int pawns = counts[0], knights = counts[1], bishops = counts[2];
  const int heavy = counts[3] + counts[4];
  if (pawns || heavy) return false;
  const int minors = knights + bishops;
  if (minors <= 1) return true;
  return rule.two_knights_insufficient && knights == 2 && bishops == 0;
}

bool property_label(PropertyKind kind, const Board& board) {
  switch (kind) {
    case PropertyKind::MaterialAdvantage: return material_advantage_label(board);
    case PropertyKind::WhiteInCheck: return in_check_label(board);
    case PropertyKind::InsufficientMaterial: return insufficient_material_label(board);
  }
  return false;
}

int from_square_label(const MoveRecord& move) { return move.from; }

}  // namespace denot::chess
