#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "denot/pipeline/config.hpp"

namespace denot::pipeline {

/// A stage failed for reasons other than bad input (exit code 3).
struct StageError : std::runtime_error {
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage(std::move(stage)) {}
  std::string stage;
};

struct Artifact {
  std::string path;  // relative to the output directory
  std::string stage;
  std::string kind;
  std::string sha256;
  std::string config_hash;  // config that produced it (seeds included)
  friend bool operator==(const Artifact&, const Artifact&) = default;
};

/// Index of everything a run emitted. Holds no timestamps, so identical
/// runs produce byte-identical manifests.
struct Manifest {
  static constexpr int kVersion = 1;
  std::string config_hash;  // config of the most recent stage run
  std::string config_json;  // canonical config, output_dir excluded
  std::map<std::string, std::string> stage_status;  // stage -> "ok" | "failed: ..."
  std::vector<Artifact> artifacts;                  // sorted by path

  /// Replaces every artifact of `stage` with `fresh` (hashing each file).
  void record_stage(const std::filesystem::path& out_dir, const std::string& stage, const std::string& config_hash,
                    const std::vector<std::pair<std::string, std::string>>& fresh);  // (path, kind)
  const Artifact* find(std::string_view path) const;
  std::vector<const Artifact*> of_kind(std::string_view kind) const;
};

std::string manifest_json(const Manifest& m);
Manifest manifest_from_json(const std::string& json);  // throws DataError
Manifest read_manifest(const std::filesystem::path& path);  // throws DataError
void write_manifest(const std::filesystem::path& path, const Manifest& m);

inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kLockName = ".denot.lock";

/// Exclusive lock on an output directory; a lock left by a dead process is
/// taken over. Throws UsageError when another live process holds it.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& out_dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

using Logger = std::function<void(std::string_view)>;

/// Runs stages against one output directory, loading and updating its
/// manifest. Each stage reads the artifacts of earlier stages from disk.
class Runner {
 public:
  Runner(ExperimentConfig config, Logger log = {});

  const ExperimentConfig& config() const noexcept { return config_; }
  const Manifest& manifest() const noexcept { return manifest_; }
  std::filesystem::path out() const { return config_.output_dir; }

  void ingest();
  void train_object();
  /// Also writes CSV copies of each snapshot when `csv` is set.
  void snapshot(bool csv = false);
  void train_observers();
  void heatmaps();
  void silhouettes();
  void proportions();
  /// ingest -> train-object -> snapshot -> observers -> heat maps ->
  /// silhouettes -> proportions. A failing stage is recorded in the manifest
  /// and rethrown.
  void run_all();

 private:
  template <typename F>
  void stage(const std::string& name, F&& body);
  void log(const std::string& msg) const;

  ExperimentConfig config_;
  Logger log_;
  Manifest manifest_;
};

struct ReportResult {
  std::string text;
  int exit_code = 0;
};

/// Human-readable summary of a manifest: artifact index with MISSING and
/// hash-mismatch markers, object metrics, the observer table with baselines,
/// denotation verdicts and proportion medians.
ReportResult render_report(const std::filesystem::path& manifest_path);

}  // namespace denot::pipeline
