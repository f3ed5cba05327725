#include "denot/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kernels.hpp"

namespace denot::nn {

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> v) : shape(std::move(s)), values(std::move(v)) {
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (n != values.size())
    throw ShapeError("tensor shape " + shape_string() + " needs " + std::to_string(n) + " values, got " +
                     std::to_string(values.size()));
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

std::string Tensor::shape_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) out << (i ? "x" : "") << shape[i];
  out << ')';
  return out.str();
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Softmax: return "softmax";
  }
  return "identity";
}

Activation activation_from_name(const std::string& name) {
  for (auto a : {Activation::Identity, Activation::Relu, Activation::Sigmoid, Activation::Softmax})
    if (activation_name(a) == name) return a;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

std::size_t layer_inputs(const Layer& layer) {
  return std::visit([](const auto& l) { return l.inputs(); }, layer);
}

std::size_t layer_outputs(const Layer& layer) {
  return std::visit([](const auto& l) { return l.outputs(); }, layer);
}

Activation layer_activation(const Layer& layer) {
  return std::visit([](const auto& l) { return l.activation; }, layer);
}

Model::Model(std::vector<Layer> layers, std::vector<std::size_t> recording_points)
    : layers_(std::move(layers)), recording_points_(std::move(recording_points)) {
  validate();
}

std::size_t Model::input_size() const { return layers_.empty() ? 0 : layer_inputs(layers_.front()); }
std::size_t Model::output_size() const { return layers_.empty() ? 0 : layer_outputs(layers_.back()); }

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i)
    n += static_cast<std::size_t>(weight(i).size() + bias(i).size());
  return n;
}

std::size_t Model::recorded_width() const {
  std::size_t n = 0;
  for (auto r : recording_points_) n += layer_outputs(layers_[r]);
  return n;
}

Matrix& Model::weight(std::size_t i) {
  return std::visit(
      [](auto& l) -> Matrix& {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, DenseLayer>) return l.weight;
        else return l.kernel;
      },
      layers_.at(i));
}

const Matrix& Model::weight(std::size_t i) const { return const_cast<Model*>(this)->weight(i); }

Vector& Model::bias(std::size_t i) {
  return std::visit([](auto& l) -> Vector& { return l.bias; }, layers_.at(i));
}

const Vector& Model::bias(std::size_t i) const { return const_cast<Model*>(this)->bias(i); }

std::vector<ParamBlock> Model::zero_blocks() const {
  std::vector<ParamBlock> out(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    out[i].weight = Matrix::Zero(weight(i).rows(), weight(i).cols());
    out[i].bias = Vector::Zero(bias(i).size());
  }
  return out;
}

void Model::validate() const {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      if (conv->kernel_h % 2 == 0 || conv->kernel_w % 2 == 0) throw ShapeError("same padding needs odd kernel sizes");
      if (conv->kernel.rows() != conv->out_channels || conv->kernel.cols() != conv->patch_size())
        throw ShapeError("conv layer " + std::to_string(i) + " kernel shape mismatch");
    }
    if (bias(i).size() != weight(i).rows())
      throw ShapeError("layer " + std::to_string(i) + " bias length does not match its outputs");
    if (i > 0 && layer_inputs(layer) != layer_outputs(layers_[i - 1]))
      throw ShapeError("layer " + std::to_string(i) + " expects " + std::to_string(layer_inputs(layer)) +
                       " inputs but layer " + std::to_string(i - 1) + " produces " +
                       std::to_string(layer_outputs(layers_[i - 1])));
  }
  for (auto r : recording_points_)
    if (r >= layers_.size()) throw ShapeError("recording point " + std::to_string(r) + " is past the last layer");
}

bool operator==(const Model& a, const Model& b) {
  if (a.layers_.size() != b.layers_.size() || a.recording_points_ != b.recording_points_) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    if (a.layers_[i].index() != b.layers_[i].index()) return false;
    if (layer_activation(a.layers_[i]) != layer_activation(b.layers_[i])) return false;
    if (a.weight(i).rows() != b.weight(i).rows() || a.weight(i).cols() != b.weight(i).cols()) return false;
    if (a.weight(i) != b.weight(i) || a.bias(i) != b.bias(i)) return false;
    if (const auto* ca = std::get_if<ConvLayer>(&a.layers_[i])) {
      const auto& cb = std::get<ConvLayer>(b.layers_[i]);
      if (ca->in_channels != cb.in_channels || ca->height != cb.height || ca->width != cb.width ||
          ca->kernel_h != cb.kernel_h || ca->kernel_w != cb.kernel_w)
        return false;
    }
  }
  return true;
}

namespace {

void glorot_fill(Matrix& w, double fan_in, double fan_out, util::Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-limit, limit);
}

}  // namespace

DenseLayer make_dense(std::size_t inputs, std::size_t outputs, Activation activation, util::Rng& rng) {
  DenseLayer l;
  l.weight.resize(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(inputs));
  glorot_fill(l.weight, static_cast<double>(inputs), static_cast<double>(outputs), rng);
  l.bias = Vector::Zero(static_cast<Eigen::Index>(outputs));
  l.activation = activation;
  return l;
}

ConvLayer make_conv(int in_channels, int out_channels, int height, int width, int kernel, Activation activation,
                    util::Rng& rng) {
  ConvLayer l;
  l.in_channels = in_channels;
  l.out_channels = out_channels;
  l.height = height;
  l.width = width;
  l.kernel_h = l.kernel_w = kernel;
  l.kernel.resize(out_channels, l.patch_size());
  const double area = kernel * kernel;
  glorot_fill(l.kernel, in_channels * area, out_channels * area, rng);
  l.bias = Vector::Zero(out_channels);
  l.activation = activation;
  return l;
}

void initialize(Model& model, std::uint64_t seed) {
  util::Rng rng(seed);
  for (auto& layer : model.layers()) {
    if (auto* dense = std::get_if<DenseLayer>(&layer)) {
      glorot_fill(dense->weight, static_cast<double>(dense->inputs()), static_cast<double>(dense->outputs()), rng);
      dense->bias.setZero();
    } else {
      auto& conv = std::get<ConvLayer>(layer);
      const double area = conv.kernel_h * conv.kernel_w;
      glorot_fill(conv.kernel, conv.in_channels * area, conv.out_channels * area, rng);
      conv.bias.setZero();
    }
  }
}

Matrix forward_batch(const Model& model, const Matrix& inputs, Matrix* recorded) {
  if (static_cast<std::size_t>(inputs.rows()) != model.input_size())
    throw ShapeError("input has " + std::to_string(inputs.rows()) + " features, model expects " +
                     std::to_string(model.input_size()));
  if (recorded) recorded->resize(static_cast<Eigen::Index>(model.recorded_width()), inputs.cols());
  Matrix current = inputs, next;
  Eigen::Index row = 0;
  const auto& layers = model.layers();
  const auto& points = model.recording_points();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    detail::layer_linear(layers[i], current, next);
    detail::apply_activation(layer_activation(layers[i]), next);
    current.swap(next);
    if (recorded && std::find(points.begin(), points.end(), i) != points.end()) {
      recorded->middleRows(row, current.rows()) = current;
      row += current.rows();
    }
  }
  return current;
}

ForwardResult forward_with_recording(const Model& model, const Tensor& input) {
  if (input.size() != model.input_size())
    throw ShapeError("input shape " + input.shape_string() + " does not match expected (" +
                     std::to_string(model.input_size()) + ")");
  Matrix x = Eigen::Map<const Matrix>(input.values.data(), static_cast<Eigen::Index>(input.size()), 1);
  Matrix recorded;
  const Matrix out = forward_batch(model, x, &recorded);
  ForwardResult result;
  result.output = Tensor::vector(std::vector<double>(out.data(), out.data() + out.size()));
  Eigen::Index row = 0;
  for (auto r : model.recording_points()) {
    const auto width = static_cast<Eigen::Index>(layer_outputs(model.layers()[r]));
    result.snapshot.layers.emplace_back(recorded.data() + row, recorded.data() + row + width);
    row += width;
  }
  return result;
}

}  // namespace denot::nn
