#pragma once

// nlohmann::json conversions shared by report writers.

#include <cmath>
#include <limits>

#include <json.hpp>

#include "denot/nn/metrics.hpp"

namespace denot::nn {

inline void to_json(nlohmann::json& j, const Confusion& c) {
  j = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

inline void from_json(const nlohmann::json& j, Confusion& c) {
  c.tp = j.at("tp");
  c.fp = j.at("fp");
  c.tn = j.at("tn");
  c.fn = j.at("fn");
}

inline void to_json(nlohmann::json& j, const Metrics& m) {
  j = {{"accuracy", m.accuracy}, {"f1", m.f1}, {"binary", m.binary}, {"confusion", m.confusion}};
}

inline void from_json(const nlohmann::json& j, Metrics& m) {
  m.accuracy = j.at("accuracy");
  m.f1 = j.at("f1");
  m.binary = j.at("binary");
  m.confusion = j.at("confusion").get<Confusion>();
}

}  // namespace denot::nn

namespace denot {

// JSON has no NaN; encode it as null.
inline nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline double number_from(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace denot
