#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "denot/observer.hpp"
#include "denot/pipeline/pipeline.hpp"
#include "denot/util/hash.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace denot::pipeline {
namespace {

std::string fmt(const char* f, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

ReportResult render_report(const fs::path& manifest_path) {
  ReportResult res;
  std::ostringstream out;
  Manifest m;
  try {
    m = read_manifest(manifest_path);
  } catch (const DataError& e) {
    res.text = std::string("error: ") + e.what() + "\n";
    res.exit_code = 2;
    return res;
  }
  const fs::path root = manifest_path.parent_path();
  if (m.artifacts.empty()) {
    res.text = "no artifacts in " + manifest_path.string() + "\n";
    res.exit_code = 2;
    return res;
  }

  std::size_t missing = 0, modified = 0;
  std::map<std::string, bool> usable;
  out << "Artifacts (config " << m.config_hash << ")\n";
  for (const auto& a : m.artifacts) {
    std::string status = "ok";
    if (!fs::exists(root / a.path)) {
      status = "MISSING";
      ++missing;
    } else if (util::sha256_file(root / a.path) != a.sha256) {
      status = "HASH MISMATCH";
      ++modified;
    }
    usable[a.path] = status == "ok";
    out << "  " << pad(status, 14) << pad(a.stage, 16) << a.path << "\n";
  }
  for (const auto& [stage, status] : m.stage_status)
    if (status != "ok") out << "  stage " << stage << ": " << status << "\n";

  if (const auto* a = m.find("object/metrics.json"); a && usable[a->path]) {
    const auto j = read_json(root / a->path);
    out << "\nObject model: top-1 train " << fmt("%.4f", j.at("train_top1")) << ", test "
        << fmt("%.4f", j.at("test_top1")) << " (uniform " << fmt("%.4f", j.at("uniform_baseline")) << ", "
        << j.at("train_positions").get<std::size_t>() << "/" << j.at("test_positions").get<std::size_t>()
        << " positions)\n";
  }

  std::vector<observer::ObserverReport> reports;
  for (const auto* a : m.of_kind("observer_report"))
    if (usable[a->path]) {
      std::ifstream in(root / a->path);
      std::ostringstream text;
      text << in.rdbuf();
      reports.push_back(observer::report_from_json(text.str()));
    }
  if (!reports.empty()) {
    out << "\n" << pad("model", 14) << pad("property", 24) << pad("train_acc", 11) << pad("test_acc", 11)
        << pad("train_f1", 11) << pad("test_f1", 11) << "label_p\n";
    std::map<chess::PropertyKind, const observer::ObserverReport*> by_property;
    for (const auto& r : reports) {
      out << pad(std::string(observer::observer_name(r.kind)), 14) << pad(std::string(chess::property_name(r.property)), 24)
          << pad(fmt("%.4f", r.train.accuracy), 11) << pad(fmt("%.4f", r.test.accuracy), 11)
          << pad(fmt("%.4f", r.train.f1), 11) << pad(fmt("%.4f", r.test.f1), 11) << fmt("%.4f", r.test_label_proportion)
          << "\n";
      by_property.emplace(r.property, &r);
    }
    for (const auto& [prop, r] : by_property)
      out << pad("all-positive", 14) << pad(std::string(chess::property_name(prop)), 24)
          << pad(fmt("%.4f", r->train_all_positive.accuracy), 11) << pad(fmt("%.4f", r->test_all_positive.accuracy), 11)
          << pad(fmt("%.4f", r->train_all_positive.f1), 11) << pad(fmt("%.4f", r->test_all_positive.f1), 11)
          << fmt("%.4f", r->test_label_proportion) << "\n";
    for (const auto& r : reports)
      for (const auto& w : r.warnings)
        out << "  warning: " << observer::observer_name(r.kind) << "/" << chess::property_name(r.property) << ": " << w
            << "\n";
  }

  if (const auto* a = m.find("denotation/ledger.csv"); a && usable[a->path]) {
    std::ifstream in(root / a->path);
    out << "\nDenotation ledger\n";
    for (std::string line; std::getline(in, line);) out << "  " << line << "\n";
  }
  if (const auto* a = m.find("denotation/discovery.json"); a && usable[a->path]) {
    const auto j = read_json(root / a->path);
    out << "Top-1 singleton F1 " << fmt("%.4f", j.at("top1_linear_f1")) << " vs full linear F1 "
        << fmt("%.4f", j.at("full_linear_f1")) << " (all-positive F1 " << fmt("%.4f", j.at("all_positive_f1")) << ")\n";
  }

  for (const char* path : {"proportions/train.json", "proportions/test.json"}) {
    const auto* a = m.find(path);
    if (!a || !usable[a->path]) continue;
    const auto j = read_json(root / a->path);
    out << "\nProportions (" << j.at("dataset_id").get<std::string>() << ", " << j.at("boards").get<std::size_t>()
        << " boards): overall median " << fmt("%.4f", j.at("overall_median")) << "; layer medians";
    for (double v : j.at("layer_medians")) out << " " << fmt("%.4f", v);
    out << "; annihilated";
    for (std::size_t v : j.at("annihilated")) out << " " << v;
    out << "\n";
  }
  if (const auto* a = m.find("proportions/controls.json"); a && usable[a->path]) {
    const auto j = read_json(root / a->path);
    for (const auto& c : j.at("controls")) {
      out << "Annihilation control matching layer " << c.at("match_layer").get<int>() << ": ";
      if (c.contains("result"))
        out << "mean median " << fmt("%.4f", c["result"]["mean_median"]) << " (sd "
            << fmt("%.4f", c["result"]["stddev_median"]) << ", single draw "
            << fmt("%.4f", c["result"]["single_draw"]["median"]) << ")\n";
      else
        out << "skipped: " << c.at("skipped").get<std::string>() << "\n";
    }
  }

  if (missing) out << "\n" << missing << " artifact(s) MISSING\n";
  if (modified) out << "\nWARNING: " << modified << " artifact(s) do not match their manifest hash\n";
  res.exit_code = missing || modified ? 2 : 0;
  res.text = out.str();
  return res;
}

}  // namespace denot::pipeline
