#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "denot/analysis/heatmap.hpp"
#include "denot/analysis/proportions.hpp"
#include "denot/chess/pgn.hpp"
#include "denot/chess/position_cache.hpp"
#include "denot/denotation.hpp"
#include "denot/nn/checkpoint.hpp"
#include "denot/object_model.hpp"
#include "denot/observer.hpp"
#include "denot/pipeline/pipeline.hpp"
#include "denot/util/hash.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace denot::pipeline {
namespace {

constexpr const char* kCachePath = "cache/positions.dnpc";
constexpr const char* kIngestSummary = "cache/ingest_summary.json";
constexpr const char* kObjectModel = "object/model.dnck";

using Produced = std::vector<std::pair<std::string, std::string>>;

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void require(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path)) throw DataError("missing " + path.string() + " (run '" + producer + "' first)");
}

std::string prop_name(chess::PropertyKind p) { return std::string(chess::property_name(p)); }

std::string snapshot_path(chess::PropertyKind p, const char* side) {
  return "snapshots/" + prop_name(p) + "." + side + ".dnss";
}

std::string observer_stem(observer::ObserverKind k, chess::PropertyKind p) {
  return "observers/" + std::string(observer::observer_name(k)) + "." + prop_name(p);
}

bool ingestible(const fs::path& p) {
  static const std::set<std::string> kExt = {".pgn", ".fen", ".epd", ".dnpc"};
  return kExt.count(p.extension().string()) > 0;
}

std::vector<fs::path> collect_inputs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && ingestible(e.path())) found.push_back(e.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(in)) {
      files.push_back(in);
    }
  }
  if (files.empty()) {
    std::string list;
    for (const auto& in : inputs) list += "\n  " + in.string();
    throw DataError("no readable input (PGN, FEN list or position cache) among:" + (list.empty() ? " <none>" : list));
  }
  return files;
}

struct Split {
  std::vector<chess::PositionRecord> train, test;
  std::vector<std::uint32_t> test_ids;  // indices into the cache
  std::size_t train_games = 0, test_games = 0;
};

Split split_cache(const std::vector<chess::PositionRecord>& records, const ExperimentConfig& cfg) {
  const auto s = object::split_by_game(records, cfg.object_test_fraction, cfg.seeds.split);
  Split out;
  std::set<std::uint32_t> tr_games, te_games;
  for (auto i : s.train) {
    out.train.push_back(records[i]);
    tr_games.insert(records[i].game_id);
  }
  for (auto i : s.test) {
    out.test.push_back(records[i]);
    out.test_ids.push_back(static_cast<std::uint32_t>(i));
    te_games.insert(records[i].game_id);
  }
  out.train_games = tr_games.size();
  out.test_games = te_games.size();
  return out;
}

chess::PositionCache load_cache(const fs::path& out) {
  require(out / kCachePath, "ingest");
  try {
    return chess::read_cache(out / kCachePath);
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
}

nn::Model load_model(const fs::path& path, const std::string& producer) {
  require(path, producer);
  try {
    return nn::load_checkpoint(path);
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
}

object::SnapshotDataset load_snapshot(const fs::path& path) {
  require(path, "snapshot");
  try {
    return object::read_snapshot_binary(path);
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
}

std::size_t row_cap(const ExperimentConfig& cfg, bool conv) {
  std::size_t cap = cfg.observer_max_train_rows;
  if (conv && cfg.conv_max_train_rows) cap = cap ? std::min(cap, cfg.conv_max_train_rows) : cfg.conv_max_train_rows;
  return cap;
}

object::SnapshotDataset capped(const object::SnapshotDataset& ds, std::size_t cap) {
  return cap && ds.rows() > cap ? ds.slice(0, cap) : ds;
}

json label_proportions(std::span<const chess::PositionRecord> records) {
  json j = json::object();
  for (auto p : chess::kAllProperties) {
    std::size_t pos = 0;
    for (const auto& r : records) pos += r.label(p);
    j[prop_name(p)] = records.empty() ? 0.0 : static_cast<double>(pos) / static_cast<double>(records.size());
  }
  return j;
}

std::string silhouette_slug(const denotation::Silhouette& s) {
  if (s.is_full()) return "all";
  std::string out;
  for (const auto& p : s.positions()) {
    if (!out.empty()) out += '-';
    out += "l" + std::to_string(p.layer) + "n" + std::to_string(p.neuron);
  }
  return out.size() > 80 ? "k" + std::to_string(s.size()) + "-" + util::short_hash(out) : out;
}

json summary_json(const analysis::ControlSummary& s) {
  return {{"target_fraction", s.target_fraction},
          {"repetitions", s.repetitions},
          {"base_seed", s.base_seed},
          {"single_draw", {{"median", s.single.median}, {"achieved_fraction", s.single.achieved_fraction},
                           {"annihilated", s.single.annihilated}}},
          {"mean_median", s.mean_median},
          {"stddev_median", s.stddev_median},
          {"min_median", s.min_median},
          {"max_median", s.max_median}};
}

}  // namespace

Runner::Runner(ExperimentConfig config, Logger log) : config_(std::move(config)), log_(std::move(log)) {
  config_.validate();
  fs::create_directories(config_.output_dir);
  const auto mpath = config_.output_dir / kManifestName;
  if (fs::exists(mpath)) manifest_ = read_manifest(mpath);
  manifest_.config_hash = config_hash(config_);
  auto j = json::parse(config_to_json(config_));
  j.erase("output_dir");
  manifest_.config_json = j.dump();
}

void Runner::log(const std::string& msg) const {
  if (log_) log_(msg);
}

template <typename F>
void Runner::stage(const std::string& name, F&& body) {
  log("[" + name + "] start");
  const auto mpath = out() / kManifestName;
  auto fail = [&](const std::string& what) {
    manifest_.stage_status[name] = "failed: " + what;
    write_manifest(mpath, manifest_);
  };
  Produced produced;
  try {
    body(produced);
  } catch (const UsageError& e) {
    fail(e.what());
    throw;
  } catch (const DataError& e) {
    fail(e.what());
    throw;
  } catch (const StageError& e) {
    fail(e.what());
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
    throw StageError(name, e.what());
  }
  manifest_.record_stage(out(), name, manifest_.config_hash, produced);
  manifest_.stage_status[name] = "ok";
  write_manifest(mpath, manifest_);
  log("[" + name + "] done (" + std::to_string(produced.size()) + " artifacts)");
}

void Runner::ingest() {
  stage("ingest", [&](Produced& produced) {
    config_.check_inputs();
    const auto files = collect_inputs(config_.inputs);
    json file_hashes = json::array();
    for (const auto& f : files) file_hashes.push_back({f.filename().string(), util::sha256_file(f)});
    const json source = {{"files", file_hashes},
                         {"max_games", config_.limits.max_games},
                         {"max_positions", config_.limits.max_positions},
                         {"cache_version", chess::PositionCache::kFormatVersion}};
    const std::string source_hash = util::sha256_hex(source.dump());
    const fs::path cache_path = out() / kCachePath;
    const fs::path summary_path = out() / kIngestSummary;

    if (fs::exists(cache_path) && fs::exists(summary_path)) {
      try {
        if (chess::read_cache(cache_path).source_hash == source_hash) {
          log("[ingest] inputs unchanged; reusing " + cache_path.string());
          produced = {{kCachePath, "position_cache"}, {kIngestSummary, "ingest_summary"}};
          return;
        }
      } catch (const std::runtime_error&) {
        // unreadable cache: rebuild below
      }
    }

    std::vector<chess::Game> games;
    std::vector<chess::Board> fen_boards;
    std::vector<chess::PositionRecord> cached;
    std::vector<std::string> warnings;
    std::size_t skipped = 0;
    for (const auto& f : files) {
      const auto ext = f.extension().string();
      if (ext == ".dnpc") {
        try {
          auto c = chess::read_cache(f);
          cached.insert(cached.end(), c.records.begin(), c.records.end());
        } catch (const std::runtime_error& e) {
          throw DataError(e.what());
        }
        continue;
      }
      const std::string text = read_text(f);
      if (ext == ".fen" || ext == ".epd") {
        auto boards = chess::parse_fen_list(text, &warnings);
        fen_boards.insert(fen_boards.end(), boards.begin(), boards.end());
        continue;
      }
      auto parsed = chess::parse_pgn(std::string_view(text));
      skipped += parsed.skipped_games;
      for (auto& w : parsed.warnings) warnings.push_back(f.filename().string() + ": " + w);
      for (auto& g : parsed.games) {
        if (games.size() >= config_.limits.max_games) break;
        games.push_back(std::move(g.game));
      }
    }

    std::size_t illegal = 0;
    auto records = chess::records_from_games(games, &illegal);
    auto next_id = static_cast<std::uint32_t>(games.size());
    for (const auto& b : fen_boards) records.push_back(chess::make_record(b, nullptr, next_id++));
    std::uint32_t max_cached = 0;
    for (auto r : cached) {
      max_cached = std::max(max_cached, r.game_id);
      r.game_id += next_id;
      records.push_back(r);
    }
    const bool truncated = records.size() > config_.limits.max_positions;
    if (truncated) records.resize(config_.limits.max_positions);
    if (records.empty()) throw DataError("inputs produced no positions");

    chess::PositionCache cache{source_hash, records};
    fs::create_directories(cache_path.parent_path());
    chess::write_cache(cache_path, cache);

    std::size_t with_moves = 0;
    std::set<std::uint32_t> game_ids;
    for (const auto& r : records) {
      with_moves += r.has_move();
      game_ids.insert(r.game_id);
    }
    json file_names = json::array();
    for (const auto& f : files) file_names.push_back(f.filename().string());
    if (warnings.size() > 50) warnings.resize(50);
    const json summary = {{"files", file_names},
                          {"games", games.size()},
                          {"skipped_games", skipped},
                          {"illegal_moves", illegal},
                          {"fen_positions", fen_boards.size()},
                          {"cached_positions", cached.size()},
                          {"positions", records.size()},
                          {"positions_with_moves", with_moves},
                          {"distinct_games", game_ids.size()},
                          {"truncated", truncated},
                          {"limits", {{"max_games", config_.limits.max_games},
                                      {"max_positions", config_.limits.max_positions}}},
                          {"label_proportions", label_proportions(records)},
                          {"source_hash", source_hash},
                          {"warnings", warnings}};
    write_text(summary_path, summary.dump(2) + "\n");
    log("[ingest] " + std::to_string(games.size()) + " games, " + std::to_string(records.size()) + " positions, " +
        std::to_string(skipped) + " skipped games");
    produced = {{kCachePath, "position_cache"}, {kIngestSummary, "ingest_summary"}};
  });
}

void Runner::train_object() {
  stage("train-object", [&](Produced& produced) {
    const auto cache = load_cache(out());
    const auto split = split_cache(cache.records, config_);
    nn::TrainConfig cfg = config_.object_train;
    cfg.rng_seed = config_.seeds.object_train;
    const auto train_n = object::object_dataset(split.train).size();
    if (train_n < cfg.batch_size)
      throw DataError("only " + std::to_string(train_n) + " training positions with moves; need at least one batch (" +
                      std::to_string(cfg.batch_size) + ")");
    auto model = object::build_object_model({}, config_.seeds.object_init);
    const auto res = object::train_object(std::move(model), split.train, split.test, cfg, [&](const nn::EpochRecord& e) {
      std::ostringstream msg;
      msg << "[train-object] epoch " << e.epoch << " loss " << e.train_loss << " val " << e.val_loss;
      log(msg.str());
    });
    fs::create_directories(out() / "object");
    nn::save_checkpoint(out() / kObjectModel, res.fit.model);
    write_text(out() / "object/history.csv", nn::history_csv(res.fit.history));
    const json metrics = {{"train_top1", res.train_accuracy},
                          {"test_top1", res.test_accuracy},
                          {"uniform_baseline", 1.0 / 64.0},
                          {"train_positions", res.train_positions},
                          {"test_positions", res.test_positions},
                          {"train_games", split.train_games},
                          {"test_games", split.test_games},
                          {"stopped_epoch", res.fit.stopped_epoch},
                          {"best_epoch", res.fit.best_epoch},
                          {"parameter_count", res.fit.model.parameter_count()},
                          {"train_config_hash", observer::config_hash(cfg)},
                          {"seeds", {{"split", config_.seeds.split},
                                     {"init", config_.seeds.object_init},
                                     {"train", config_.seeds.object_train}}}};
    write_text(out() / "object/metrics.json", metrics.dump(2) + "\n");
    std::ostringstream msg;
    msg << "[train-object] top-1 train " << res.train_accuracy << " test " << res.test_accuracy;
    log(msg.str());
    produced = {{kObjectModel, "object_model"},
                {"object/history.csv", "object_history"},
                {"object/metrics.json", "object_metrics"}};
  });
}

void Runner::snapshot(bool csv) {
  stage("snapshot", [&](Produced& produced) {
    const auto cache = load_cache(out());
    const auto model = load_model(out() / kObjectModel, "train-object");
    const auto model_hash = util::sha256_file(out() / kObjectModel).substr(0, 16);
    const auto split = split_cache(cache.records, config_);
    const std::size_t n = split.test.size();
    const auto n_test = static_cast<std::size_t>(std::llround(config_.observer_test_fraction * static_cast<double>(n)));
    if (n_test == 0 || n_test >= n)
      throw DataError("object test set of " + std::to_string(n) + " boards is too small to split for observers");
    const std::size_t n_train = n - n_test;
    const auto acts = object::record_activations(model, split.test);
    fs::create_directories(out() / "snapshots");
    json summary = {{"boards", n}, {"observer_train_rows", n_train}, {"observer_test_rows", n_test},
                    {"model_hash", model_hash}, {"label_proportions", json::object()}};
    for (auto p : config_.properties) {
      const auto ds = object::label_snapshots(acts, split.test, p, split.test_ids, model_hash);
      const auto tr = ds.slice(0, n_train), te = ds.slice(n_train, n);
      for (const auto& [side, part] : {std::pair{"train", &tr}, std::pair{"test", &te}}) {
        const auto path = snapshot_path(p, side);
        object::write_snapshot_binary(out() / path, *part);
        produced.emplace_back(path, "snapshot");
        if (csv) {
          const auto csv_path = path.substr(0, path.size() - 5) + ".csv";
          object::write_snapshot_csv(out() / csv_path, *part);
          produced.emplace_back(csv_path, "snapshot_csv");
        }
      }
      summary["label_proportions"][prop_name(p)] = {{"train", tr.label_proportion()}, {"test", te.label_proportion()}};
    }
    write_text(out() / "snapshots/summary.json", summary.dump(2) + "\n");
    produced.emplace_back("snapshots/summary.json", "snapshot_summary");
  });
}

void Runner::train_observers() {
  stage("train-observer", [&](Produced& produced) {
    std::vector<observer::ObserverReport> reports;
    for (auto p : config_.properties) {
      const auto train = load_snapshot(out() / snapshot_path(p, "train"));
      const auto test = load_snapshot(out() / snapshot_path(p, "test"));
      for (auto k : config_.observers) {
        const auto tr = capped(train, row_cap(config_, k == observer::ObserverKind::Conv));
        const std::string stem = observer_stem(k, p);
        log("[train-observer] " + stem + " on " + std::to_string(tr.rows()) + " rows");
        auto run = observer::train_observer(k, tr, test, config_.observer_train, config_.seeds.observer);
        for (const auto& w : run.report.warnings) log("[train-observer] warning: " + stem + ": " + w);
        write_text(out() / (stem + ".json"), observer::report_json(run.report) + "\n");
        nn::save_checkpoint(out() / (stem + ".dnck"), run.model);
        write_text(out() / (stem + ".history.csv"), nn::history_csv(run.history));
        produced.emplace_back(stem + ".json", "observer_report");
        produced.emplace_back(stem + ".dnck", "observer_model");
        produced.emplace_back(stem + ".history.csv", "observer_history");
        std::ostringstream msg;
        msg << "[train-observer] " << stem << " test acc " << run.report.test.accuracy << " f1 " << run.report.test.f1;
        log(msg.str());
        reports.push_back(std::move(run.report));
      }
    }
    write_text(out() / "observers/results.csv", observer::results_table_csv(reports));
    produced.emplace_back("observers/results.csv", "observer_table");
  });
}

void Runner::heatmaps() {
  stage("heatmap", [&](Produced& produced) {
    for (auto p : config_.properties) {
      const std::string stem = observer_stem(observer::ObserverKind::Linear, p);
      const auto model = load_model(out() / (stem + ".dnck"), "train-observer");
      const auto report = observer::report_from_json(read_text(out() / (stem + ".json")));
      try {
        const auto map = analysis::heatmap_from_linear(model, p, report.config_hash);
        analysis::render_heatmap(map, out() / "heatmaps", prop_name(p));
      } catch (const std::invalid_argument& e) {
        throw DataError(stem + ": " + e.what());
      }
      produced.emplace_back("heatmaps/" + prop_name(p) + ".svg", "heatmap_svg");
      produced.emplace_back("heatmaps/" + prop_name(p) + ".csv", "heatmap_csv");
    }
  });
}

void Runner::silhouettes() {
  stage("silhouette", [&](Produced& produced) {
    denotation::AssessConfig ac;
    ac.train = config_.observer_train;
    ac.seed = config_.seeds.observer;
    std::vector<denotation::DenotationResult> results;
    const auto emit = [&](const denotation::DenotationResult& r) {
      const std::string path = "denotation/" + prop_name(r.property) + "." + std::string(denotation::family_name(r.family)) +
                               "." + silhouette_slug(r.silhouette) + ".json";
      write_text(out() / path, denotation::result_json(r) + "\n");
      produced.emplace_back(path, "denotation_result");
      std::ostringstream msg;
      msg << "[silhouette] " << prop_name(r.property) << " " << denotation::family_name(r.family) << " {"
          << r.silhouette.to_string() << "} " << denotation::measure_name(r.measure) << " " << r.performance
          << (r.verdict ? " denotes" : " does not denote") << " at t=" << r.threshold;
      log(msg.str());
      results.push_back(r);
    };
    const auto assess = [&](chess::PropertyKind p, const denotation::Silhouette& s, denotation::Family f) {
      const auto train = capped(load_snapshot(out() / snapshot_path(p, "train")), row_cap(config_, false));
      const auto test = load_snapshot(out() / snapshot_path(p, "test"));
      return denotation::assess_denotation(train, test, s, f, config_.denotation_threshold, config_.measure, ac);
    };

    using chess::PropertyKind;
    const bool have_material = std::find(config_.properties.begin(), config_.properties.end(),
                                         PropertyKind::MaterialAdvantage) != config_.properties.end();
    if (have_material) {
      const std::string stem = observer_stem(observer::ObserverKind::Linear, PropertyKind::MaterialAdvantage);
      const auto model = load_model(out() / (stem + ".dnck"), "train-observer");
      const auto map = analysis::heatmap_from_linear(model, PropertyKind::MaterialAdvantage);
      const auto top = denotation::top_weight_silhouette(map, config_.top_k);
      const auto full = assess(PropertyKind::MaterialAdvantage, denotation::Silhouette::full(), denotation::Family::Linear);
      emit(full);
      const auto pair = assess(PropertyKind::MaterialAdvantage, top, denotation::Family::Linear);
      emit(pair);
      emit(assess(PropertyKind::MaterialAdvantage, top, denotation::Family::AndGate));
      json singles = json::array();
      for (const auto& pos : top.positions()) {
        const auto s = denotation::Silhouette::single(pos.layer, pos.neuron);
        const auto lin = assess(PropertyKind::MaterialAdvantage, s, denotation::Family::Linear);
        emit(lin);
        emit(assess(PropertyKind::MaterialAdvantage, s, denotation::Family::AndGate));
        singles.push_back({{"layer", pos.layer},
                           {"neuron", pos.neuron},
                           {"weight", map.grid(pos.layer, pos.neuron)},
                           {"linear_f1", lin.test.f1},
                           {"linear_accuracy", lin.test.accuracy}});
      }
      // top_weight_silhouette keeps canonical order; recover the rank-1 position.
      const auto top1 = denotation::top_weight_silhouette(map, 1).positions().front();
      double top1_f1 = 0.0;
      for (const auto& s : singles)
        if (s["layer"] == top1.layer && s["neuron"] == top1.neuron) top1_f1 = s["linear_f1"];
      const json discovery = {{"property", prop_name(PropertyKind::MaterialAdvantage)},
                              {"top_k", config_.top_k},
                              {"top_silhouette", top.to_string()},
                              {"top1", {{"layer", top1.layer}, {"neuron", top1.neuron}}},
                              {"top1_linear_f1", top1_f1},
                              {"full_linear_f1", full.test.f1},
                              {"abs_difference", std::abs(top1_f1 - full.test.f1)},
                              {"top_k_linear_f1", pair.test.f1},
                              {"all_positive_f1", full.all_positive_f1},
                              {"test_label_proportion", full.test_label_proportion},
                              {"singletons", singles}};
      write_text(out() / "denotation/discovery.json", discovery.dump(2) + "\n");
      produced.emplace_back("denotation/discovery.json", "denotation_discovery");
    } else {
      log("[silhouette] material_advantage not configured; skipping top-weight discovery");
    }
    for (const auto& spec : config_.silhouettes) {
      const auto s = denotation::Silhouette::parse(spec);
      for (auto p : config_.properties) emit(assess(p, s, denotation::Family::Linear));
    }
    write_text(out() / "denotation/ledger.csv", denotation::ledger_csv(results));
    produced.emplace_back("denotation/ledger.csv", "denotation_ledger");
  });
}

void Runner::proportions() {
  stage("proportions", [&](Produced& produced) {
    const auto cache = load_cache(out());
    const auto model = load_model(out() / kObjectModel, "train-object");
    const auto split = split_cache(cache.records, config_);
    if (split.train.empty() || split.test.size() < 2) throw DataError("too few boards for proportion analysis");
    const auto train = analysis::neuron_label_proportions(model, split.train, "object-train");
    const auto test = analysis::neuron_label_proportions(model, split.test, "object-test");
    const std::span<const chess::PositionRecord> test_span(split.test);
    const std::size_t half = test_span.size() / 2;
    const auto first = analysis::neuron_label_proportions(model, test_span.first(half), "object-test-first-half");
    const auto second = analysis::neuron_label_proportions(model, test_span.subspan(half), "object-test-second-half");

    fs::create_directories(out() / "proportions");
    write_text(out() / "proportions/train.json", analysis::proportion_report_json(train) + "\n");
    write_text(out() / "proportions/test.json", analysis::proportion_report_json(test) + "\n");
    write_text(out() / "proportions/neurons.csv", analysis::proportion_csv(train, test));
    const auto cdfs = analysis::layer_cdfs(train);
    analysis::render_cdf_svg(cdfs, out() / "proportions/cdf.svg");
    write_text(out() / "proportions/cdf.csv", analysis::cdf_table_csv(cdfs));

    // Agreement between disjoint halves of the test boards, and train vs test.
    auto agreement = [](const analysis::ProportionReport& a, const analysis::ProportionReport& b, double tol) {
      std::size_t within = 0, total = 0;
      double worst = 0.0;
      for (std::size_t l = 0; l < a.proportions.size(); ++l)
        for (std::size_t n = 0; n < a.proportions[l].size(); ++n) {
          const double d = std::abs(a.proportions[l][n] - b.proportions[l][n]);
          worst = std::max(worst, d);
          within += d <= tol;
          ++total;
        }
      return json{{"tolerance", tol},
                  {"fraction_within", static_cast<double>(within) / static_cast<double>(total)},
                  {"max_abs_difference", worst}};
    };
    const json stability = {{"test_halves", agreement(first, second, 0.02)},
                            {"train_vs_test", agreement(train, test, 0.005)},
                            {"half_boards", {first.boards, second.boards}}};
    write_text(out() / "proportions/stability.json", stability.dump(2) + "\n");

    json controls = json::array();
    const auto& layer1 = train.proportions.front();
    const double width = static_cast<double>(layer1.size());
    for (std::size_t l = 1; l < train.proportions.size(); ++l) {
      const double target = static_cast<double>(train.annihilated[l]) / width;
      json c = {{"match_layer", l + 1}, {"target_fraction", target}};
      try {
        c["result"] = summary_json(analysis::annihilation_control_repeated(layer1, target, config_.seeds.control,
                                                                           config_.control_repetitions));
      } catch (const std::invalid_argument& e) {
        c["skipped"] = e.what();
      }
      controls.push_back(c);
    }
    const json ctl = {{"layer1_median", train.layer_medians.front()},
                      {"layer1_annihilated", train.annihilated.front()},
                      {"controls", controls}};
    write_text(out() / "proportions/controls.json", ctl.dump(2) + "\n");
    std::ostringstream msg;
    msg << "[proportions] overall median train " << train.overall_median << " test " << test.overall_median;
    log(msg.str());
    produced = {{"proportions/train.json", "proportion_report"},  {"proportions/test.json", "proportion_report"},
                {"proportions/neurons.csv", "proportion_csv"},    {"proportions/cdf.svg", "cdf_plot"},
                {"proportions/cdf.csv", "cdf_table"},             {"proportions/stability.json", "proportion_stability"},
                {"proportions/controls.json", "annihilation_controls"}};
  });
}

void Runner::run_all() {
  ingest();
  train_object();
  snapshot();
  train_observers();
  heatmaps();
  silhouettes();
  proportions();
}

}  // namespace denot::pipeline
