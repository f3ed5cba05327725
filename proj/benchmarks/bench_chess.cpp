#include <benchmark/benchmark.h>

#include "denot/chess/encoding.hpp"
#include "denot/chess/labels.hpp"
#include "denot/chess/movegen.hpp"
#include "denot/chess/pgn.hpp"
#include "denot/chess/position_cache.hpp"
#include "denot/chess/synth.hpp"

using namespace denot::chess;

namespace {

constexpr const char* kKiwipete = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";

std::uint64_t perft(const Board& b, int depth) {
  const auto moves = legal_moves(b);
  if (depth == 1) return moves.size();
  std::uint64_t n = 0;
  for (const auto& m : moves) n += perft(apply_move(b, m), depth - 1);
  return n;
}

void BM_PerftInitial(benchmark::State& state) {
  const auto b = Board::initial();
  const int depth = static_cast<int>(state.range(0));
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    nodes = perft(b, depth);
    benchmark::DoNotOptimize(nodes);
  }
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_PerftInitial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PerftKiwipete(benchmark::State& state) {
  const auto b = Board::from_fen(kKiwipete);
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    nodes = perft(b, 3);
    benchmark::DoNotOptimize(nodes);
  }
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_PerftKiwipete)->Unit(benchmark::kMillisecond);

void BM_LabelsAndEncoding(benchmark::State& state) {
  const auto b = normalize_to_white(Board::from_fen(kKiwipete));
  for (auto _ : state) {
    benchmark::DoNotOptimize(material_advantage_label(b));
    benchmark::DoNotOptimize(in_check_label(b));
    benchmark::DoNotOptimize(insufficient_material_label(b));
    benchmark::DoNotOptimize(encode_board(b));
  }
}
BENCHMARK(BM_LabelsAndEncoding);

void BM_ParseAndReplayPgn(benchmark::State& state) {
  std::string text;
  for (const auto& g : generate_games({.seed = 5, .games = 20})) text += write_pgn(g, {}) + "\n";
  std::size_t positions = 0;
  for (auto _ : state) {
    const auto parsed = parse_pgn(text);
    std::vector<Game> games;
    for (const auto& g : parsed.games) games.push_back(g.game);
    positions = records_from_games(games).size();
    benchmark::DoNotOptimize(positions);
  }
  state.counters["positions/s"] =
      benchmark::Counter(static_cast<double>(positions), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_ParseAndReplayPgn)->Unit(benchmark::kMillisecond);

}  // namespace
