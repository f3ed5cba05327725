#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "denot/chess/encoding.hpp"
#include "denot/chess/labels.hpp"
#include "denot/chess/movegen.hpp"
#include "denot/chess/position_cache.hpp"
#include "denot/chess/synth.hpp"
#include "oracle/chess_oracle.hpp"
#include "test_util.hpp"

using namespace denot::chess;

namespace {

Board fen(const char* f) { return Board::from_fen(f); }

}  // namespace

TEST(Labels, MaterialAdvantageExamples) {
  EXPECT_FALSE(material_advantage_label(Board::initial()));
  EXPECT_TRUE(material_advantage_label(fen("rnb1kbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1")));
  EXPECT_FALSE(material_advantage_label(fen("4k3/8/8/2bn4/8/8/8/R3K3 w - - 0 1")));  // 5 vs 6
  EXPECT_FALSE(material_advantage_label(fen("4k3/8/8/3n4/8/8/8/2B1K3 w - - 0 1")));  // 3 vs 3 tie
}

TEST(Labels, InCheckExamples) {
  EXPECT_FALSE(in_check_label(Board::initial()));
  EXPECT_TRUE(in_check_label(fen("4k3/8/8/4r3/8/8/8/4K3 w - - 0 1")));
  EXPECT_FALSE(in_check_label(fen("4k3/8/8/4r3/8/4N3/8/4K3 w - - 0 1")));
  EXPECT_TRUE(in_check_label(fen("4k3/8/8/8/8/8/3p4/4K3 w - - 0 1")));   // pawn attacks diagonally down
  EXPECT_FALSE(in_check_label(fen("4k3/8/8/8/8/4p3/8/4K3 w - - 0 1")));  // not straight ahead
}

TEST(Labels, InsufficientMaterialExamples) {
  EXPECT_TRUE(insufficient_material_label(fen("rnbqkbnr/pppppppp/8/8/8/8/8/2B1K3 w kq - 0 1")));
  EXPECT_FALSE(insufficient_material_label(Board::initial()));
  EXPECT_FALSE(insufficient_material_label(fen("4k3/8/8/8/8/8/4P3/4K3 w - - 0 1")));
  EXPECT_TRUE(insufficient_material_label(fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1")));
  const auto two_knights = fen("4k3/8/8/8/8/8/8/1N2K1N1 w - - 0 1");
  EXPECT_FALSE(insufficient_material_label(two_knights));
  EXPECT_TRUE(insufficient_material_label(two_knights, {.two_knights_insufficient = true}));
}

TEST(Labels, FromSquareExamples) {
  EXPECT_EQ(from_square_label({make_square(1, 4), make_square(3, 4)}), 12);
  EXPECT_EQ(from_square_label({make_square(0, 0), make_square(7, 0)}), 0);
  EXPECT_EQ(from_square_label({make_square(0, 6), make_square(2, 5)}), 6);
}

TEST(Labels, PropertyNames) {
  for (auto k : kAllProperties) EXPECT_EQ(property_from_name(property_name(k)), k);
  EXPECT_THROW(property_from_name("nope"), std::invalid_argument);
}

TEST(Labels, AgreeWithBruteForceOracleOnThousandPositions) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto p = oracle::random_position(rng, i % 2 ? 4 : 14);  // sparse boards exercise insufficient material
    const auto b = Board::from_fen(oracle::to_fen(p));
    ASSERT_EQ(material_advantage_label(b), oracle::material_advantage(p)) << oracle::to_fen(p);
    ASSERT_EQ(in_check_label(b), oracle::white_in_check(p)) << oracle::to_fen(p);
    ASSERT_EQ(insufficient_material_label(b), oracle::insufficient(p)) << oracle::to_fen(p);

    const auto n = normalize_to_white(b);
    const auto q = oracle::normalize(p);
    ASSERT_EQ(n.to_fen(), oracle::to_fen(q));
    ASSERT_EQ(normalize_to_white(n), n);
    ASSERT_EQ(reflect_and_swap(reflect_and_swap(b)), b);
    ASSERT_FALSE(material_advantage_label(b) && material_advantage_label(reflect_and_swap(b)));
  }
}

TEST(Encoding, InitialPositionPawnPlane) {
  const auto t = encode_board(Board::initial());
  for (int file = 0; file < 8; ++file) {
    EXPECT_EQ(t.at(0, 1, file), 1);
    EXPECT_EQ(t.at(0, 6, file), -1);
    for (int rank : {0, 2, 3, 4, 5, 7}) EXPECT_EQ(t.at(0, rank, file), 0);
  }
  int abs_sum = 0;
  for (auto v : t.values) abs_sum += std::abs(v);
  EXPECT_EQ(abs_sum, 32);
}

TEST(Encoding, KingsOnly) {
  const auto t = encode_board(fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1"));
  int nonzero = 0;
  for (int i = 0; i < kBoardTensorSize; ++i)
    if (t.values[static_cast<std::size_t>(i)]) {
      ++nonzero;
      EXPECT_EQ(i / 64, 5);
    }
  EXPECT_EQ(nonzero, 2);
  EXPECT_EQ(t.at(5, 0, 4), 1);
  EXPECT_EQ(t.at(5, 7, 4), -1);
}

TEST(Encoding, RejectsBlackToMove) {
  EXPECT_THROW(encode_board(fen("4k3/8/8/8/8/8/8/4K3 b - - 0 1")), BoardError);
}

TEST(Encoding, NonzeroCountEqualsPieceCount) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto b = normalize_to_white(Board::from_fen(oracle::to_fen(oracle::random_position(rng))));
    const auto t = encode_board(b);
    int nonzero = 0, kings_w = 0, kings_b = 0;
    for (auto v : t.values) nonzero += v != 0;
    for (int s = 0; s < 64; ++s) {
      kings_w += t.values[static_cast<std::size_t>(5 * 64 + s)] == 1;
      kings_b += t.values[static_cast<std::size_t>(5 * 64 + s)] == -1;
    }
    EXPECT_EQ(nonzero, b.piece_count());
    EXPECT_EQ(kings_w, 1);
    EXPECT_EQ(kings_b, 1);
  }
}

TEST(Records, BlackMoveIsMirrored) {
  auto b = Board::initial();
  b = apply_move(b, {make_square(1, 4), make_square(3, 4)});
  const MoveRecord e7e5{make_square(6, 4), make_square(4, 4)};
  const auto r = make_record(b, &e7e5, 9);
  EXPECT_EQ(r.from_square, 12);  // e7 mirrors to e2
  EXPECT_EQ(r.game_id, 9u);
  EXPECT_EQ(r.tensor, encode_board(normalize_to_white(b)));
  EXPECT_FALSE(r.material_advantage);
}

TEST(Records, LabelsComputedAfterNormalization) {
  // White is up two rooks but black moves, so the normalized mover is behind.
  const auto b = fen("4k3/8/8/8/8/8/8/R3K2R b - - 0 1");
  const auto r = make_record(b, nullptr, 0);
  EXPECT_FALSE(r.has_move());
  EXPECT_FALSE(r.material_advantage);
  EXPECT_FALSE(r.white_in_check);
  // Black to move and in check: after normalization the mover is white and in check.
  const auto c = fen("4k2R/8/8/8/8/8/8/4K3 b - - 0 1");
  EXPECT_TRUE(make_record(c, nullptr, 0).white_in_check);
}

TEST(Records, TerminalPositionsExcluded) {
  std::vector<Game> games(1);
  for (auto [f, t] : {std::pair{"f2", "f3"}, {"e7", "e5"}, {"g2", "g4"}, {"d8", "h4"}})
    games[0].moves.push_back({*parse_square(f), *parse_square(t)});
  EXPECT_EQ(records_from_games(games).size(), 4u);
}

TEST(PositionCache, BinaryAndCsvRoundTrip) {
  const auto games = generate_games({.seed = 4, .games = 3});
  PositionCache cache{"abc123", records_from_games(games)};
  cache.records.push_back(make_record(Board::initial(), nullptr, 99));
  const auto dir = testutil::temp_dir("cache");
  write_cache(dir / "c.dnpc", cache);
  const auto back = read_cache(dir / "c.dnpc");
  EXPECT_EQ(back.source_hash, cache.source_hash);
  EXPECT_EQ(back.records, cache.records);
  write_cache_csv(dir / "c.csv", cache);
  EXPECT_EQ(read_cache_csv(dir / "c.csv").records, cache.records);
  std::filesystem::remove_all(dir);
}

TEST(PositionCache, RejectsWrongMagic) {
  const auto dir = testutil::temp_dir("badcache");
  std::ofstream(dir / "x.dnpc") << "NOPE";
  EXPECT_THROW(read_cache(dir / "x.dnpc"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
