#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "denot/pipeline/pipeline.hpp"
#include "denot/util/hash.hpp"

namespace denot::pipeline {

void Manifest::record_stage(const std::filesystem::path& out_dir, const std::string& stage,
                            const std::string& config_hash, const std::vector<std::pair<std::string, std::string>>& fresh) {
  std::erase_if(artifacts, [&](const Artifact& a) { return a.stage == stage; });
  for (const auto& [path, kind] : fresh) {
    std::erase_if(artifacts, [&](const Artifact& a) { return a.path == path; });
    artifacts.push_back({path, stage, kind, util::sha256_file(out_dir / path), config_hash});
  }
  std::sort(artifacts.begin(), artifacts.end(), [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
}

const Artifact* Manifest::find(std::string_view path) const {
  for (const auto& a : artifacts)
    if (a.path == path) return &a;
  return nullptr;
}

std::vector<const Artifact*> Manifest::of_kind(std::string_view kind) const {
  std::vector<const Artifact*> out;
  for (const auto& a : artifacts)
    if (a.kind == kind) out.push_back(&a);
  return out;
}

std::string manifest_json(const Manifest& m) {
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& a : m.artifacts)
    arts.push_back(
        {{"path", a.path}, {"stage", a.stage}, {"kind", a.kind}, {"sha256", a.sha256}, {"config_hash", a.config_hash}});
  nlohmann::json config = m.config_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(m.config_json);
  const nlohmann::json j = {{"version", Manifest::kVersion},
                            {"config_hash", m.config_hash},
                            {"config", config},
                            {"stages", m.stage_status},
                            {"artifacts", arts}};
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Manifest m;
    if (j.value("version", 0) != Manifest::kVersion) throw DataError("unsupported manifest version");
    m.config_hash = j.value("config_hash", "");
    if (j.contains("config") && !j.at("config").empty()) m.config_json = j.at("config").dump();
    m.stage_status = j.value("stages", std::map<std::string, std::string>{});
    for (const auto& a : j.value("artifacts", nlohmann::json::array()))
      m.artifacts.push_back({a.at("path"), a.at("stage"), a.at("kind"), a.at("sha256"), a.value("config_hash", "")});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read manifest " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return manifest_from_json(text.str());
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << manifest_json(m);
    if (!out) throw std::runtime_error("cannot write manifest " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

namespace {

bool process_alive(pid_t pid) { return pid > 0 && (::kill(pid, 0) == 0 || errno == EPERM); }

}  // namespace

DirectoryLock::DirectoryLock(const std::filesystem::path& out_dir) : path_(out_dir / kLockName) {
  std::filesystem::create_directories(out_dir);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(::getpid()) + "\n";
      [[maybe_unused]] const auto n = ::write(fd, pid.data(), pid.size());
      ::close(fd);
      return;
    }
    if (errno != EEXIST) throw std::runtime_error("cannot create lock " + path_.string() + ": " + std::strerror(errno));
    pid_t holder = 0;
    std::ifstream(path_) >> holder;
    if (process_alive(holder))
      throw UsageError("output directory " + out_dir.string() + " is locked by running process " +
                       std::to_string(holder));
    std::filesystem::remove(path_);  // stale lock
  }
  throw UsageError("could not acquire lock " + path_.string());
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

}  // namespace denot::pipeline
