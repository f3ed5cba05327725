#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "denot/chess/labels.hpp"
#include "denot/denotation.hpp"
#include "denot/nn/train.hpp"
#include "denot/observer.hpp"

namespace denot::pipeline {

/// Bad configuration or command line (exit code 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable, missing or malformed data (exit code 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Explicit seeds for every random stream; nothing reads the clock.
struct Seeds {
  std::uint64_t split = 1;
  std::uint64_t object_init = 2;
  std::uint64_t object_train = 3;
  std::uint64_t observer = 4;
  std::uint64_t control = 5;
};

struct Limits {
  std::size_t max_games = 5000;
  std::size_t max_positions = 200000;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> inputs;  // PGN / FEN files, directories, or position caches
  std::filesystem::path output_dir = "denot-out";
  nn::TrainConfig object_train{};
  nn::TrainConfig observer_train{};
  std::vector<chess::PropertyKind> properties{chess::kAllProperties.begin(), chess::kAllProperties.end()};
  std::vector<observer::ObserverKind> observers{observer::kAllObservers.begin(), observer::kAllObservers.end()};
  std::vector<std::string> silhouettes;  // extra specs for the silhouette stage
  Seeds seeds{};
  Limits limits{};
  double object_test_fraction = 0.25;
  double observer_test_fraction = 0.3;  // tail of the object test boards held out from observers
  std::size_t observer_max_train_rows = 0;  // 0 = no cap
  std::size_t conv_max_train_rows = 4000;   // the conv observer is the slowest stage
  std::size_t top_k = 2;
  double denotation_threshold = 0.86;
  denotation::Measure measure = denotation::Measure::F1;
  std::size_t control_repetitions = 100;

  /// Throws UsageError on inconsistent values.
  void validate() const;
  /// Throws DataError when an input path does not exist.
  void check_inputs() const;
};

/// Environment variable that overrides output_dir (the only one consulted).
inline constexpr const char* kOutputDirEnv = "DENOT_OUTPUT_DIR";

std::string config_to_json(const ExperimentConfig& config);
/// Missing keys take defaults; unknown keys are a UsageError. Relative input
/// paths are resolved against `base_dir` when it is non-empty.
ExperimentConfig config_from_json(const std::string& json, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies the output-directory environment override, if set.
void apply_environment(ExperimentConfig& config);

/// Short hash of the canonical config JSON (output_dir excluded).
std::string config_hash(const ExperimentConfig& config);

}  // namespace denot::pipeline
