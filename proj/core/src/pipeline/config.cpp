#include "denot/pipeline/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "denot/util/hash.hpp"

namespace denot::pipeline {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw UsageError("unknown config key '" + where + "." + key + "'");
}

json train_to_json(const nn::TrainConfig& c) {
  return {{"batch_size", c.batch_size},
          {"max_epochs", c.max_epochs},
          {"validation_fraction", c.validation_fraction},
          {"early_stopping", c.early_stopping},
          {"patience", c.early_stopping_patience},
          {"learning_rate", c.adam.learning_rate},
          {"beta1", c.adam.beta1},
          {"beta2", c.adam.beta2},
          {"epsilon", c.adam.epsilon},
          {"balance_classes", c.balance_classes}};
}

nn::TrainConfig train_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"batch_size", "max_epochs", "validation_fraction", "early_stopping", "patience", "learning_rate",
                     "beta1", "beta2", "epsilon", "balance_classes"},
                 where);
  nn::TrainConfig c;
  c.batch_size = j.value("batch_size", c.batch_size);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
  c.early_stopping = j.value("early_stopping", c.early_stopping);
  c.early_stopping_patience = j.value("patience", c.early_stopping_patience);
  c.adam.learning_rate = j.value("learning_rate", c.adam.learning_rate);
  c.adam.beta1 = j.value("beta1", c.adam.beta1);
  c.adam.beta2 = j.value("beta2", c.adam.beta2);
  c.adam.epsilon = j.value("epsilon", c.adam.epsilon);
  c.balance_classes = j.value("balance_classes", c.balance_classes);
  return c;
}

json to_json_value(const ExperimentConfig& c, bool with_output) {
  json inputs = json::array();
  for (const auto& p : c.inputs) inputs.push_back(p.generic_string());
  json props = json::array();
  for (auto p : c.properties) props.push_back(chess::property_name(p));
  json kinds = json::array();
  for (auto k : c.observers) kinds.push_back(observer::observer_name(k));
  json j = {{"inputs", inputs},
            {"object_train", train_to_json(c.object_train)},
            {"observer_train", train_to_json(c.observer_train)},
            {"properties", props},
            {"observers", kinds},
            {"silhouettes", c.silhouettes},
            {"seeds",
             {{"split", c.seeds.split},
              {"object_init", c.seeds.object_init},
              {"object_train", c.seeds.object_train},
              {"observer", c.seeds.observer},
              {"control", c.seeds.control}}},
            {"limits", {{"max_games", c.limits.max_games}, {"max_positions", c.limits.max_positions}}},
            {"object_test_fraction", c.object_test_fraction},
            {"observer_test_fraction", c.observer_test_fraction},
            {"observer_max_train_rows", c.observer_max_train_rows},
            {"conv_max_train_rows", c.conv_max_train_rows},
            {"top_k", c.top_k},
            {"denotation_threshold", c.denotation_threshold},
            {"measure", denotation::measure_name(c.measure)},
            {"control_repetitions", c.control_repetitions}};
  if (with_output) j["output_dir"] = c.output_dir.generic_string();
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    object_train.validate();
    observer_train.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(object_test_fraction > 0.0 && object_test_fraction < 1.0))
    throw UsageError("object_test_fraction must lie in (0, 1)");
  if (!(observer_test_fraction > 0.0 && observer_test_fraction < 1.0))
    throw UsageError("observer_test_fraction must lie in (0, 1)");
  if (limits.max_games == 0 || limits.max_positions == 0) throw UsageError("limits must be positive");
  if (properties.empty()) throw UsageError("no properties configured");
  if (observers.empty()) throw UsageError("no observer kinds configured");
  if (top_k == 0 || top_k > 384) throw UsageError("top_k must lie in 1..384");
  if (control_repetitions == 0) throw UsageError("control_repetitions must be positive");
  if (output_dir.empty()) throw UsageError("output_dir is empty");
  for (const auto& s : silhouettes) {
    try {
      denotation::Silhouette::parse(s);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("silhouettes: ") + e.what());
    }
  }
}

void ExperimentConfig::check_inputs() const {
  std::string missing;
  for (const auto& p : inputs)
    if (!std::filesystem::exists(p)) missing += "\n  " + p.string();
  if (!missing.empty()) throw DataError("input paths do not exist:" + missing);
}

std::string config_to_json(const ExperimentConfig& config) { return to_json_value(config, true).dump(2) + "\n"; }

ExperimentConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"inputs", "output_dir", "object_train", "observer_train", "properties", "observers", "silhouettes",
                  "seeds", "limits", "object_test_fraction", "observer_test_fraction", "observer_max_train_rows",
                  "conv_max_train_rows", "top_k", "denotation_threshold", "measure", "control_repetitions"},
                 "config");
  ExperimentConfig c;
  try {
    if (j.contains("inputs"))
      for (const auto& p : j.at("inputs")) {
        std::filesystem::path path = p.get<std::string>();
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        c.inputs.push_back(path);
      }
    if (j.contains("output_dir")) {
      c.output_dir = j.at("output_dir").get<std::string>();
      if (c.output_dir.is_relative() && !base_dir.empty()) c.output_dir = base_dir / c.output_dir;
    }
    if (j.contains("object_train")) c.object_train = train_from_json(j.at("object_train"), "object_train");
    if (j.contains("observer_train")) c.observer_train = train_from_json(j.at("observer_train"), "observer_train");
    if (j.contains("properties")) {
      c.properties.clear();
      for (const auto& p : j.at("properties")) c.properties.push_back(chess::property_from_name(p.get<std::string>()));
    }
    if (j.contains("observers")) {
      c.observers.clear();
      for (const auto& k : j.at("observers")) c.observers.push_back(observer::observer_from_name(k.get<std::string>()));
    }
    c.silhouettes = j.value("silhouettes", c.silhouettes);
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      reject_unknown(s, {"split", "object_init", "object_train", "observer", "control"}, "seeds");
      c.seeds.split = s.value("split", c.seeds.split);
      c.seeds.object_init = s.value("object_init", c.seeds.object_init);
      c.seeds.object_train = s.value("object_train", c.seeds.object_train);
      c.seeds.observer = s.value("observer", c.seeds.observer);
      c.seeds.control = s.value("control", c.seeds.control);
    }
    if (j.contains("limits")) {
      const auto& l = j.at("limits");
      reject_unknown(l, {"max_games", "max_positions"}, "limits");
      c.limits.max_games = l.value("max_games", c.limits.max_games);
      c.limits.max_positions = l.value("max_positions", c.limits.max_positions);
    }
    c.object_test_fraction = j.value("object_test_fraction", c.object_test_fraction);
    c.observer_test_fraction = j.value("observer_test_fraction", c.observer_test_fraction);
    c.observer_max_train_rows = j.value("observer_max_train_rows", c.observer_max_train_rows);
    c.conv_max_train_rows = j.value("conv_max_train_rows", c.conv_max_train_rows);
    c.top_k = j.value("top_k", c.top_k);
    c.denotation_threshold = j.value("denotation_threshold", c.denotation_threshold);
    if (j.contains("measure")) c.measure = denotation::measure_from_name(j.at("measure").get<std::string>());
    c.control_repetitions = j.value("control_repetitions", c.control_repetitions);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_json(text.str(), path.parent_path());
}

void apply_environment(ExperimentConfig& config) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) config.output_dir = dir;
}

std::string config_hash(const ExperimentConfig& config) { return util::short_hash(to_json_value(config, false).dump()); }

}  // namespace denot::pipeline
