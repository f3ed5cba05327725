// denot: command-line front end for the denotation experiments.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 stage failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "denot/chess/movegen.hpp"
#include "denot/chess/pgn.hpp"
#include "denot/chess/synth.hpp"
#include "denot/pipeline/pipeline.hpp"

namespace {

using namespace denot;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kStage = 3 };

struct Overrides {
  std::string config;
  std::string out;
  bool quiet = false;
  std::vector<std::string> inputs;
  std::optional<std::size_t> max_games, max_positions;
  std::optional<std::size_t> object_epochs, observer_epochs;
  std::optional<std::size_t> observer_rows, conv_rows;
  std::vector<std::string> properties, kinds, silhouettes;
  std::optional<double> threshold;
  std::optional<std::string> measure;
  std::optional<std::size_t> top_k, repetitions;
};

pipeline::ExperimentConfig build_config(const Overrides& o) {
  auto cfg = o.config.empty() ? pipeline::ExperimentConfig{} : pipeline::load_config(o.config);
  pipeline::apply_environment(cfg);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.inputs.empty()) cfg.inputs.assign(o.inputs.begin(), o.inputs.end());
  if (o.max_games) cfg.limits.max_games = *o.max_games;
  if (o.max_positions) cfg.limits.max_positions = *o.max_positions;
  if (o.object_epochs) cfg.object_train.max_epochs = *o.object_epochs;
  if (o.observer_epochs) cfg.observer_train.max_epochs = *o.observer_epochs;
  if (o.observer_rows) cfg.observer_max_train_rows = *o.observer_rows;
  if (o.conv_rows) cfg.conv_max_train_rows = *o.conv_rows;
  try {
    if (!o.properties.empty()) {
      cfg.properties.clear();
      for (const auto& p : o.properties) cfg.properties.push_back(chess::property_from_name(p));
    }
    if (!o.kinds.empty()) {
      cfg.observers.clear();
      for (const auto& k : o.kinds) cfg.observers.push_back(observer::observer_from_name(k));
    }
    if (o.measure) cfg.measure = denotation::measure_from_name(*o.measure);
  } catch (const std::invalid_argument& e) {
    throw pipeline::UsageError(e.what());
  }
  if (!o.silhouettes.empty()) cfg.silhouettes = o.silhouettes;
  if (o.threshold) cfg.denotation_threshold = *o.threshold;
  if (o.top_k) cfg.top_k = *o.top_k;
  if (o.repetitions) cfg.control_repetitions = *o.repetitions;
  cfg.validate();
  return cfg;
}

std::string game_result(const chess::Game& g) {
  chess::Board b = g.initial;
  for (const auto& m : g.moves) b = chess::apply_move(b, m);
  if (!chess::legal_moves(b).empty()) return "1/2-1/2";
  if (!chess::in_check(b, b.side_to_move())) return "1/2-1/2";
  return b.side_to_move() == chess::Color::White ? "0-1" : "1-0";
}

int synth_games(const chess::SynthConfig& sc, const std::string& output) {
  std::ofstream out(output);
  if (!out) {
    std::cerr << "error: cannot write " << output << "\n";
    return kData;
  }
  const auto games = chess::generate_games(sc);
  for (std::size_t i = 0; i < games.size(); ++i) {
    const std::string result = game_result(games[i]);
    out << chess::write_pgn(games[i],
                            {{"Event", "denot synthetic self-play"},
                             {"Round", std::to_string(i + 1)},
                             {"Seed", std::to_string(sc.seed)},
                             {"Result", result}},
                            result)
        << "\n";
  }
  std::cerr << "wrote " << games.size() << " games to " << output << "\n";
  return out ? kOk : kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observer-model denotation experiments on a chess move predictor"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("-c,--config", o.config, "Experiment config (JSON)");
  app.add_option("-o,--out", o.out, "Output directory (overrides config and DENOT_OUTPUT_DIR)");
  app.add_flag("-q,--quiet", o.quiet, "Only print errors");
  app.add_option("-i,--input", o.inputs, "PGN/FEN file, directory, or position cache (repeatable)");
  app.add_option("--max-games", o.max_games, "Desk-scale game limit");
  app.add_option("--max-positions", o.max_positions, "Desk-scale position limit");
  app.add_option("--object-epochs", o.object_epochs, "Max epochs for the object model");
  app.add_option("--observer-epochs", o.observer_epochs, "Max epochs for observers");
  app.add_option("--observer-rows", o.observer_rows, "Cap on observer training rows (0 = none)");
  app.add_option("--conv-rows", o.conv_rows, "Cap on conv observer training rows (0 = none)");
  app.add_option("-p,--property", o.properties, "material_advantage | white_in_check | insufficient_material");
  app.add_option("-k,--kind", o.kinds, "Observer kind: linear | mlp | conv");
  app.add_option("-s,--silhouette", o.silhouettes, "Silhouette spec, e.g. \"1:17,2:90\" or \"all\"");
  app.add_option("-t,--threshold", o.threshold, "Denotation threshold t");
  app.add_option("--measure", o.measure, "f1 | accuracy");
  app.add_option("--top-k", o.top_k, "Size of the top-|weight| silhouette");
  app.add_option("--repetitions", o.repetitions, "Annihilation-control repetitions");

  auto* ingest = app.add_subcommand("ingest", "Parse inputs into a labeled position cache");
  auto* train_object = app.add_subcommand("train-object", "Train the object model");
  auto* snapshot = app.add_subcommand("snapshot", "Record activation snapshots of the object test boards");
  bool snapshot_csv = false;
  snapshot->add_flag("--csv", snapshot_csv, "Also write CSV snapshots");
  auto* train_observer = app.add_subcommand("train-observer", "Train observers on snapshots");
  auto* heatmap = app.add_subcommand("heatmap", "Render linear-observer weight heat maps");
  auto* silhouette = app.add_subcommand("silhouette", "Assess silhouettes for denotation");
  auto* proportions = app.add_subcommand("proportions", "Per-neuron label proportions, CDFs and controls");
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage end to end");
  auto* report = app.add_subcommand("report", "Summarize a manifest");
  std::string manifest_path;
  report->add_option("-m,--manifest", manifest_path, "Manifest (default <out>/manifest.json)");
  auto* show_config = app.add_subcommand("show-config", "Print the effective config as JSON");

  auto* synth = app.add_subcommand("synth-games", "Write seeded synthetic self-play games as PGN");
  chess::SynthConfig sc;
  std::string synth_out;
  synth->add_option("-n,--games", sc.games, "Number of games")->capture_default_str();
  synth->add_option("--seed", sc.seed, "Generator seed")->capture_default_str();
  synth->add_option("--temperature", sc.temperature, "Softmax temperature in pawns")->capture_default_str();
  synth->add_option("--max-plies", sc.max_plies, "Ply limit per game")->capture_default_str();
  synth->add_option("--pgn", synth_out, "Output PGN file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (synth->parsed()) return synth_games(sc, synth_out);

    const auto cfg = build_config(o);
    if (show_config->parsed()) {
      std::cout << pipeline::config_to_json(cfg);
      return kOk;
    }
    if (report->parsed()) {
      const auto path = manifest_path.empty() ? cfg.output_dir / pipeline::kManifestName
                                              : std::filesystem::path(manifest_path);
      const auto r = pipeline::render_report(path);
      std::cout << r.text;
      return r.exit_code;
    }

    pipeline::DirectoryLock lock(cfg.output_dir);
    pipeline::Logger log;
    if (!o.quiet) log = [](std::string_view msg) { std::cerr << msg << "\n"; };
    pipeline::Runner runner(cfg, log);
    if (ingest->parsed()) runner.ingest();
    else if (train_object->parsed()) runner.train_object();
    else if (snapshot->parsed()) runner.snapshot(snapshot_csv);
    else if (train_observer->parsed()) runner.train_observers();
    else if (heatmap->parsed()) runner.heatmaps();
    else if (silhouette->parsed()) runner.silhouettes();
    else if (proportions->parsed()) runner.proportions();
    else if (pipeline_cmd->parsed()) runner.run_all();
    return kOk;
  } catch (const pipeline::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const pipeline::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const pipeline::StageError& e) {
    std::cerr << "stage failed: " << e.what() << "\n";
    return kStage;
  } catch (const std::exception& e) {
    std::cerr << "stage failed: " << e.what() << "\n";
    return kStage;
  }
}
