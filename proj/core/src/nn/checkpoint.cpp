#include "denot/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "denot/util/binary_io.hpp"

namespace denot::nn {
namespace {

constexpr char kMagic[4] = {'D', 'N', 'C', 'K'};

nlohmann::json architecture_json(const Model& model) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : model.layers()) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      layers.push_back({{"kind", "dense"},
                        {"inputs", d->inputs()},
                        {"outputs", d->outputs()},
                        {"activation", activation_name(d->activation)}});
    } else {
      const auto& c = std::get<ConvLayer>(layer);
      layers.push_back({{"kind", "conv2d"},
                        {"in_channels", c.in_channels},
                        {"out_channels", c.out_channels},
                        {"height", c.height},
                        {"width", c.width},
                        {"kernel_h", c.kernel_h},
                        {"kernel_w", c.kernel_w},
                        {"padding", "same"},
                        {"activation", activation_name(c.activation)}});
    }
  }
  return {{"layers", layers}, {"recording_points", model.recording_points()}};
}

void write_matrix(util::BinaryWriter& w, const Matrix& m) {
  w.bytes(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(double));
}

void read_matrix(util::BinaryReader& r, Matrix& m) {
  r.bytes(reinterpret_cast<char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(double));
}

}  // namespace

std::string describe_architecture(const Model& model) { return architecture_json(model).dump(); }

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  util::BinaryWriter w(out);
  w.bytes(kMagic, 4);
  w.u32(kCheckpointVersion);
  w.string(describe_architecture(model));
  for (std::size_t i = 0; i < model.layers().size(); ++i) {
    write_matrix(w, model.weight(i));
    w.bytes(reinterpret_cast<const char*>(model.bias(i).data()), static_cast<std::size_t>(model.bias(i).size()) * sizeof(double));
  }
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  util::BinaryReader r(in, path.string());
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a model checkpoint: " + path.string());
  const auto version = r.u32();
  if (version != kCheckpointVersion) throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));

  const auto header = nlohmann::json::parse(r.string());
  std::vector<Layer> layers;
  for (const auto& spec : header.at("layers")) {
    const auto act = activation_from_name(spec.at("activation").get<std::string>());
    if (spec.at("kind") == "dense") {
      DenseLayer d;
      d.weight.resize(spec.at("outputs").get<Eigen::Index>(), spec.at("inputs").get<Eigen::Index>());
      d.bias.resize(spec.at("outputs").get<Eigen::Index>());
      d.activation = act;
      layers.emplace_back(std::move(d));
    } else if (spec.at("kind") == "conv2d") {
      ConvLayer c;
      c.in_channels = spec.at("in_channels");
      c.out_channels = spec.at("out_channels");
      c.height = spec.at("height");
      c.width = spec.at("width");
      c.kernel_h = spec.at("kernel_h");
      c.kernel_w = spec.at("kernel_w");
      c.kernel.resize(c.out_channels, c.patch_size());
      c.bias.resize(c.out_channels);
      c.activation = act;
      layers.emplace_back(std::move(c));
    } else {
      throw std::runtime_error("unknown layer kind in checkpoint: " + spec.at("kind").dump());
    }
  }
  Model model(std::move(layers), header.at("recording_points").get<std::vector<std::size_t>>());
  for (std::size_t i = 0; i < model.layers().size(); ++i) {
    read_matrix(r, model.weight(i));
    r.bytes(reinterpret_cast<char*>(model.bias(i).data()), static_cast<std::size_t>(model.bias(i).size()) * sizeof(double));
  }
  return model;
}

}  // namespace denot::nn
