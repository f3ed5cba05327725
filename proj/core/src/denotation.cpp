#include "denot/denotation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json_support.hpp"

namespace denot::denotation {

Silhouette::Silhouette(std::vector<Position> positions, observer::ActivationGeometry geometry)
    : positions_(std::move(positions)), geometry_(geometry) {
  if (positions_.empty()) throw std::invalid_argument("silhouette must not be empty");
  for (const auto& p : positions_)
    if (p.layer < 0 || p.layer >= geometry_.layers || p.neuron < 0 || p.neuron >= geometry_.width)
      throw std::invalid_argument("silhouette position " + std::to_string(p.layer) + ":" + std::to_string(p.neuron) +
                                  " outside " + std::to_string(geometry_.layers) + "x" +
                                  std::to_string(geometry_.width));
  std::sort(positions_.begin(), positions_.end());
  positions_.erase(std::unique(positions_.begin(), positions_.end()), positions_.end());
}

Silhouette Silhouette::full(observer::ActivationGeometry geometry) {
  std::vector<Position> all;
  for (int l = 0; l < geometry.layers; ++l)
    for (int n = 0; n < geometry.width; ++n) all.push_back({l, n});
  return Silhouette(std::move(all), geometry);
}

Silhouette Silhouette::single(int layer, int neuron, observer::ActivationGeometry geometry) {
  return Silhouette({{layer, neuron}}, geometry);
}

Silhouette Silhouette::parse(std::string_view text, observer::ActivationGeometry geometry) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<Position> ps;
  for (std::string tok; in >> tok;) {
    if (tok == "all") return full(geometry);
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad silhouette position '" + tok + "'");
    try {
      std::size_t used_l = 0, used_n = 0;
      const int l = std::stoi(tok.substr(0, colon), &used_l);
      const int n = std::stoi(tok.substr(colon + 1), &used_n);
      if (used_l != colon || used_n != tok.size() - colon - 1) throw std::invalid_argument(tok);
      ps.push_back({l, n});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad silhouette position '" + tok + "'");
    }
  }
  return Silhouette(std::move(ps), geometry);
}

std::vector<int> Silhouette::flat() const {
  std::vector<int> out;
  out.reserve(positions_.size());
  for (const auto& p : positions_) out.push_back(p.layer * geometry_.width + p.neuron);
  return out;
}

std::string Silhouette::to_string() const {
  if (is_full()) return "all";
  std::string out;
  for (const auto& p : positions_) {
    if (!out.empty()) out += ' ';
    out += std::to_string(p.layer) + ":" + std::to_string(p.neuron);
  }
  return out;
}

object::SnapshotDataset restrict(const object::SnapshotDataset& data, const Silhouette& silhouette) {
  std::unordered_map<int, Eigen::Index> row_of;
  for (std::size_t r = 0; r < data.columns.size(); ++r) row_of.emplace(data.columns[r], static_cast<Eigen::Index>(r));
  const auto flat = silhouette.flat();
  object::SnapshotDataset out;
  out.labels = data.labels;
  out.board_ids = data.board_ids;
  out.property = data.property;
  out.model_hash = data.model_hash;
  out.columns = flat;
  out.activations.resize(static_cast<Eigen::Index>(flat.size()), data.activations.cols());
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto it = row_of.find(flat[i]);
    if (it == row_of.end())
      throw std::invalid_argument("snapshot dataset does not hold position " + std::to_string(flat[i]));
    out.activations.row(static_cast<Eigen::Index>(i)) = data.activations.row(it->second);
  }
  return out;
}

int and_gate_predict(std::span<const double> snapshot, const Silhouette& silhouette, double activation_threshold) {
  for (int idx : silhouette.flat()) {
    if (static_cast<std::size_t>(idx) >= snapshot.size())
      throw std::invalid_argument("snapshot shorter than silhouette geometry");
    if (!(snapshot[static_cast<std::size_t>(idx)] > activation_threshold)) return 0;
  }
  return 1;
}

std::vector<int> and_gate_predict(const object::SnapshotDataset& data, const Silhouette& silhouette,
                                  double activation_threshold) {
  const auto r = restrict(data, silhouette);
  std::vector<int> out(r.rows(), 1);
  for (Eigen::Index c = 0; c < r.activations.cols(); ++c)
    out[static_cast<std::size_t>(c)] = (r.activations.col(c).array() > activation_threshold).all() ? 1 : 0;
  return out;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::AndGate: return "and_gate";
    case Family::Linear: return "linear";
    case Family::Mlp: return "mlp";
    case Family::Conv: return "conv";
  }
  return "unknown";
}

Family family_from_name(std::string_view name) {
  for (auto f : {Family::AndGate, Family::Linear, Family::Mlp, Family::Conv})
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown observer family '" + std::string(name) + "'");
}

std::string_view measure_name(Measure m) { return m == Measure::F1 ? "f1" : "accuracy"; }

Measure measure_from_name(std::string_view name) {
  if (name == "f1") return Measure::F1;
  if (name == "accuracy") return Measure::Accuracy;
  throw std::invalid_argument("unknown performance measure '" + std::string(name) + "'");
}

bool denotes(double performance, double t) noexcept { return performance >= t; }

DenotationResult assess_denotation(const object::SnapshotDataset& train, const object::SnapshotDataset& test,
                                   const Silhouette& silhouette, Family family, double t, Measure measure,
                                   const AssessConfig& config) {
  if (family == Family::Conv && !silhouette.is_full())
    throw std::invalid_argument("conv observers need the full silhouette; restriction breaks the image layout");
  if (test.rows() == 0) throw std::invalid_argument("assess_denotation: empty test set");

  DenotationResult res;
  res.silhouette = silhouette;
  res.property = test.property;
  res.family = family;
  res.measure = measure;
  res.threshold = t;

  const auto test_r = restrict(test, silhouette);
  if (family == Family::AndGate) {
    res.test = nn::binary_metrics(and_gate_predict(test_r, silhouette, config.activation_threshold), test_r.labels);
  } else {
    const auto kind = family == Family::Linear ? observer::ObserverKind::Linear
                      : family == Family::Mlp  ? observer::ObserverKind::Mlp
                                               : observer::ObserverKind::Conv;
    const auto run = observer::train_observer(kind, restrict(train, silhouette), test_r, config.train, config.seed);
    res.test = run.report.test;
  }
  res.performance = measure == Measure::F1 ? res.test.f1 : res.test.accuracy;
  res.all_positive_f1 = nn::all_positive_baseline(test_r.labels).f1;
  res.test_label_proportion = test_r.label_proportion();
  res.verdict = denotes(res.performance, t);
  return res;
}

Silhouette top_weight_silhouette(const analysis::HeatMap& map, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(map.grid.size());
  if (k == 0 || k > n)
    throw std::invalid_argument("top_weight_silhouette: k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
  const auto w = map.flatten();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Flat index order equals (layer, neuron) order, so a stable sort breaks ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(w[a]) > std::abs(w[b]); });
  const observer::ActivationGeometry g{map.layers(), map.width()};
  std::vector<Position> ps;
  for (std::size_t i = 0; i < k; ++i)
    ps.push_back({static_cast<int>(order[i]) / g.width, static_cast<int>(order[i]) % g.width});
  return Silhouette(std::move(ps), g);
}

std::string result_json(const DenotationResult& r) {
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : r.silhouette.positions()) positions.push_back({p.layer, p.neuron});
  const auto g = r.silhouette.geometry();
  const nlohmann::json j = {{"silhouette", r.silhouette.to_string()},
                            {"positions", positions},
                            {"geometry", {g.layers, g.width}},
                            {"property", chess::property_name(r.property)},
                            {"family", family_name(r.family)},
                            {"measure", measure_name(r.measure)},
                            {"threshold", r.threshold},
                            {"test", r.test},
                            {"performance", r.performance},
                            {"all_positive_f1", r.all_positive_f1},
                            {"test_label_proportion", r.test_label_proportion},
                            {"verdict", r.verdict}};
  return j.dump(2);
}

DenotationResult result_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  const observer::ActivationGeometry g{j.at("geometry").at(0).get<int>(), j.at("geometry").at(1).get<int>()};
  std::vector<Position> ps;
  for (const auto& p : j.at("positions")) ps.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
  DenotationResult r;
  r.silhouette = Silhouette(std::move(ps), g);
  r.property = chess::property_from_name(j.at("property").get<std::string>());
  r.family = family_from_name(j.at("family").get<std::string>());
  r.measure = measure_from_name(j.at("measure").get<std::string>());
  r.threshold = j.at("threshold");
  r.test = j.at("test").get<nn::Metrics>();
  r.performance = j.at("performance");
  r.all_positive_f1 = j.at("all_positive_f1");
  r.test_label_proportion = j.at("test_label_proportion");
  r.verdict = j.at("verdict");
  return r;
}

std::string ledger_csv(std::span<const DenotationResult> results) {
  std::ostringstream out;
  out.precision(6);
  out << "silhouette,family,property,measure,performance,t,verdict\n";
  for (const auto& r : results)
    out << r.silhouette.to_string() << ',' << family_name(r.family) << ',' << chess::property_name(r.property) << ','
        << measure_name(r.measure) << ',' << r.performance << ',' << r.threshold << ',' << (r.verdict ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace denot::denotation
