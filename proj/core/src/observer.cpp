#include "denot/observer.hpp"

#include <sstream>
#include <stdexcept>

#include "denot/util/hash.hpp"
#include "json_support.hpp"

namespace denot::observer {

std::string_view observer_name(ObserverKind kind) {
  switch (kind) {
    case ObserverKind::Linear: return "linear";
    case ObserverKind::Mlp: return "mlp";
    case ObserverKind::Conv: return "conv";
  }
  return "unknown";
}

ObserverKind observer_from_name(std::string_view name) {
  for (auto k : kAllObservers)
    if (observer_name(k) == name) return k;
  throw std::invalid_argument("unknown observer kind '" + std::string(name) + "'");
}

nn::Model build_observer(ObserverKind kind, std::uint64_t seed, std::size_t inputs, ActivationGeometry geometry) {
  util::Rng rng(seed);
  std::vector<nn::Layer> layers;
  switch (kind) {
    case ObserverKind::Linear:
      layers.emplace_back(nn::make_dense(inputs, 1, nn::Activation::Sigmoid, rng));
      break;
    case ObserverKind::Mlp:
      layers.emplace_back(nn::make_dense(inputs, 256, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_dense(256, 256, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_dense(256, 256, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_dense(256, 1, nn::Activation::Sigmoid, rng));
      break;
    case ObserverKind::Conv: {
      constexpr int kChannels = 32;
      const int h = geometry.layers, w = geometry.width;
      layers.emplace_back(nn::make_conv(1, kChannels, h, w, 3, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_conv(kChannels, kChannels, h, w, 3, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_conv(kChannels, kChannels, h, w, 3, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_dense(static_cast<std::size_t>(kChannels * h * w), 256, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_dense(256, 256, nn::Activation::Relu, rng));
      layers.emplace_back(nn::make_dense(256, 1, nn::Activation::Sigmoid, rng));
      break;
    }
  }
  return nn::Model(std::move(layers), {});
}

double label_proportion(std::span<const int> labels) {
  if (labels.empty()) throw std::invalid_argument("label_proportion: empty dataset");
  std::size_t pos = 0;
  for (int y : labels) pos += y != 0;
  return static_cast<double>(pos) / static_cast<double>(labels.size());
}

std::string config_hash(const nn::TrainConfig& c) {
  const nlohmann::json j = {{"batch_size", c.batch_size},
                            {"max_epochs", c.max_epochs},
                            {"validation_fraction", c.validation_fraction},
                            {"early_stopping", c.early_stopping},
                            {"patience", c.early_stopping_patience},
                            {"adam", {c.adam.learning_rate, c.adam.beta1, c.adam.beta2, c.adam.epsilon}},
                            {"seed", c.rng_seed},
                            {"balance_classes", c.balance_classes}};
  return util::short_hash(j.dump());
}

ObserverRun train_observer(ObserverKind kind, const object::SnapshotDataset& train,
                           const object::SnapshotDataset& test, const nn::TrainConfig& config, std::uint64_t seed,
                           const nn::EpochCallback& on_epoch) {
  if (train.rows() == 0) throw std::invalid_argument("train_observer: empty training dataset");
  if (train.columns != test.columns) throw std::invalid_argument("train_observer: train/test column sets differ");
  const std::size_t inputs = train.columns.size();
  if (kind == ObserverKind::Conv && inputs != static_cast<std::size_t>(ActivationGeometry{}.size()))
    throw std::invalid_argument("conv observer needs the full activation geometry");

  ObserverRun run;
  auto& rep = run.report;
  rep.kind = kind;
  rep.property = train.property;
  rep.inputs = inputs;
  rep.seed = seed;
  rep.config_hash = config_hash(config);
  rep.train_rows = train.rows();
  rep.test_rows = test.rows();
  rep.train_label_proportion = label_proportion(train.labels);
  if (test.rows()) rep.test_label_proportion = label_proportion(test.labels);
  if (rep.train_label_proportion == 0.0 || rep.train_label_proportion == 1.0)
    rep.warnings.push_back("constant training labels (proportion " + std::to_string(rep.train_label_proportion) +
                           "); observer cannot learn a decision boundary");

  nn::TrainConfig cfg = config;
  cfg.rng_seed = seed;
  nn::Model model = build_observer(kind, seed, inputs);
  const nn::Dataset train_data = train.as_training_data();
  auto fitted = nn::fit(std::move(model), train_data, cfg, on_epoch);
  run.model = std::move(fitted.model);
  run.history = std::move(fitted.history);
  rep.stopped_epoch = fitted.stopped_epoch;
  rep.best_epoch = fitted.best_epoch;

  rep.train = nn::evaluate(run.model, train_data);
  rep.train_majority = nn::majority_baseline(train.labels);
  rep.train_all_positive = nn::all_positive_baseline(train.labels);
  if (test.rows()) {
    rep.test = nn::evaluate(run.model, test.as_training_data());
    rep.test_majority = nn::majority_baseline(test.labels);
    rep.test_all_positive = nn::all_positive_baseline(test.labels);
  } else {
    rep.warnings.push_back("empty observer test set");
  }
  return run;
}

std::string report_json(const ObserverReport& r) {
  const nlohmann::json j = {
      {"kind", observer_name(r.kind)},
      {"property", chess::property_name(r.property)},
      {"train", r.train},
      {"test", r.test},
      {"baselines",
       {{"train_majority", r.train_majority},
        {"test_majority", r.test_majority},
        {"train_all_positive", r.train_all_positive},
        {"test_all_positive", r.test_all_positive}}},
      {"train_label_proportion", r.train_label_proportion},
      {"test_label_proportion", r.test_label_proportion},
      {"train_rows", r.train_rows},
      {"test_rows", r.test_rows},
      {"inputs", r.inputs},
      {"stopped_epoch", r.stopped_epoch},
      {"best_epoch", r.best_epoch},
      {"decision_threshold", r.decision_threshold},
      {"loss", r.loss},
      {"config_hash", r.config_hash},
      {"seed", r.seed},
      {"warnings", r.warnings},
  };
  return j.dump(2);
}

ObserverReport report_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ObserverReport r;
  r.kind = observer_from_name(j.at("kind").get<std::string>());
  r.property = chess::property_from_name(j.at("property").get<std::string>());
  r.train = j.at("train").get<nn::Metrics>();
  r.test = j.at("test").get<nn::Metrics>();
  const auto& b = j.at("baselines");
  r.train_majority = b.at("train_majority").get<nn::Metrics>();
  r.test_majority = b.at("test_majority").get<nn::Metrics>();
  r.train_all_positive = b.at("train_all_positive").get<nn::Metrics>();
  r.test_all_positive = b.at("test_all_positive").get<nn::Metrics>();
  r.train_label_proportion = j.at("train_label_proportion");
  r.test_label_proportion = j.at("test_label_proportion");
  r.train_rows = j.at("train_rows");
  r.test_rows = j.at("test_rows");
  r.inputs = j.at("inputs");
  r.stopped_epoch = j.at("stopped_epoch");
  r.best_epoch = j.at("best_epoch");
  r.decision_threshold = j.at("decision_threshold");
  r.loss = j.at("loss");
  r.config_hash = j.at("config_hash");
  r.seed = j.at("seed");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::string results_table_csv(std::span<const ObserverReport> reports) {
  std::ostringstream out;
  out.precision(6);
  out << "model,property,train_accuracy,test_accuracy,train_f1,test_f1\n";
  for (const auto& r : reports)
    out << observer_name(r.kind) << ',' << chess::property_name(r.property) << ',' << r.train.accuracy << ','
        << r.test.accuracy << ',' << r.train.f1 << ',' << r.test.f1 << '\n';
  return out.str();
}

}  // namespace denot::observer
