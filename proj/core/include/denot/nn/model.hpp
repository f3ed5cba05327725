#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "denot/util/rng.hpp"

namespace denot::nn {

using Matrix = Eigen::MatrixXd;  // column-major; batches store one example per column
using Vector = Eigen::VectorXd;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shape + flat row-major values.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;
  Tensor(std::vector<std::size_t> shape, std::vector<double> values);
  static Tensor vector(std::vector<double> values);

  std::size_t size() const noexcept { return values.size(); }
  std::string shape_string() const;
};

enum class Activation { Identity, Relu, Sigmoid, Softmax };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::Identity;

  std::size_t inputs() const noexcept { return static_cast<std::size_t>(weight.cols()); }
  std::size_t outputs() const noexcept { return static_cast<std::size_t>(weight.rows()); }
};

/// 2-D convolution, stride 1, same (zero) padding, odd kernel sizes. Input and
/// output feature maps are flattened channel-major: index = c * H * W + h * W + w.
struct ConvLayer {
  int in_channels = 1;
  int out_channels = 1;
  int height = 1;
  int width = 1;
  int kernel_h = 3;
  int kernel_w = 3;
  Matrix kernel;  // out_channels x (in_channels * kernel_h * kernel_w)
  Vector bias;    // out_channels
  Activation activation = Activation::Identity;

  std::size_t inputs() const noexcept { return static_cast<std::size_t>(in_channels * height * width); }
  std::size_t outputs() const noexcept { return static_cast<std::size_t>(out_channels * height * width); }
  int patch_size() const noexcept { return in_channels * kernel_h * kernel_w; }
};

using Layer = std::variant<DenseLayer, ConvLayer>;

std::size_t layer_inputs(const Layer& layer);
std::size_t layer_outputs(const Layer& layer);
Activation layer_activation(const Layer& layer);

/// Parameter storage shared by the model, its gradients and Adam moments.
struct ParamBlock {
  Matrix weight;
  Vector bias;
};

/// Ordered layers plus the indices of layers whose post-activation outputs
/// are recorded.
class Model {
 public:
  Model() = default;
  Model(std::vector<Layer> layers, std::vector<std::size_t> recording_points);

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }
  const std::vector<std::size_t>& recording_points() const noexcept { return recording_points_; }

  std::size_t input_size() const;
  std::size_t output_size() const;
  std::size_t parameter_count() const;
  std::size_t recorded_width() const;  // sum of recorded layer widths

  Matrix& weight(std::size_t layer);
  const Matrix& weight(std::size_t layer) const;
  Vector& bias(std::size_t layer);
  const Vector& bias(std::size_t layer) const;

  /// Zero-initialized blocks with the same shapes as this model's parameters.
  std::vector<ParamBlock> zero_blocks() const;

  /// Throws ShapeError if adjacent layers do not compose or a recording point
  /// is out of range.
  void validate() const;

  friend bool operator==(const Model& a, const Model& b);

 private:
  std::vector<Layer> layers_;
  std::vector<std::size_t> recording_points_;
};

using Gradients = std::vector<ParamBlock>;

/// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out))) and zero biases.
DenseLayer make_dense(std::size_t inputs, std::size_t outputs, Activation activation, util::Rng& rng);
ConvLayer make_conv(int in_channels, int out_channels, int height, int width, int kernel, Activation activation,
                    util::Rng& rng);

/// Re-initializes every parameter from `seed` (Glorot uniform, zero bias).
void initialize(Model& model, std::uint64_t seed);

struct ActivationSnapshot {
  std::vector<std::vector<double>> layers;  // one entry per recording point
};

struct ForwardResult {
  Tensor output;
  ActivationSnapshot snapshot;
};

/// Single-example forward pass; throws ShapeError naming expected vs actual
/// input size.
ForwardResult forward_with_recording(const Model& model, const Tensor& input);

/// Batch forward (one example per column). When `recorded` is non-null it
/// receives the recorded activations stacked in recording order (rows =
/// recorded_width()).
Matrix forward_batch(const Model& model, const Matrix& inputs, Matrix* recorded = nullptr);

}  // namespace denot::nn
