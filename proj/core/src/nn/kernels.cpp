#include "kernels.hpp"

#include <algorithm>
#include <cmath>

namespace denot::nn::detail {
namespace {

// patches(p, c * kh * kw + ki * kw + kj) = x[c, h + ki - ph, w + kj - pw], p = h * W + w.
void im2col(const ConvLayer& conv, const double* x, Matrix& patches) {
  const int H = conv.height, W = conv.width, kh = conv.kernel_h, kw = conv.kernel_w;
  const int ph = (kh - 1) / 2, pw = (kw - 1) / 2;
  patches.setZero(H * W, conv.patch_size());
  for (int c = 0; c < conv.in_channels; ++c) {
    const double* plane = x + c * H * W;
    for (int ki = 0; ki < kh; ++ki) {
      for (int kj = 0; kj < kw; ++kj) {
        double* col = patches.col(c * kh * kw + ki * kw + kj).data();
        for (int h = 0; h < H; ++h) {
          const int sh = h + ki - ph;
          if (sh < 0 || sh >= H) continue;
          const int w0 = std::max(0, pw - kj), w1 = std::min(W, W + pw - kj);
          for (int w = w0; w < w1; ++w) col[h * W + w] = plane[sh * W + w + kj - pw];
        }
      }
    }
  }
}

void col2im_add(const ConvLayer& conv, const Matrix& dpatches, double* dx) {
  const int H = conv.height, W = conv.width, kh = conv.kernel_h, kw = conv.kernel_w;
  const int ph = (kh - 1) / 2, pw = (kw - 1) / 2;
  for (int c = 0; c < conv.in_channels; ++c) {
    double* plane = dx + c * H * W;
    for (int ki = 0; ki < kh; ++ki) {
      for (int kj = 0; kj < kw; ++kj) {
        const double* col = dpatches.col(c * kh * kw + ki * kw + kj).data();
        for (int h = 0; h < H; ++h) {
          const int sh = h + ki - ph;
          if (sh < 0 || sh >= H) continue;
          const int w0 = std::max(0, pw - kj), w1 = std::min(W, W + pw - kj);
          for (int w = w0; w < w1; ++w) plane[sh * W + w + kj - pw] += col[h * W + w];
        }
      }
    }
  }
}

}  // namespace

void apply_activation(Activation a, Matrix& z) {
  switch (a) {
    case Activation::Identity: return;
    case Activation::Relu: z = z.cwiseMax(0.0); return;
    case Activation::Sigmoid:
      z = z.unaryExpr([](double v) { return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); });
      return;
    case Activation::Softmax:
      for (Eigen::Index j = 0; j < z.cols(); ++j) {
        auto col = z.col(j);
        col.array() = (col.array() - col.maxCoeff()).exp();
        col /= col.sum();
      }
      return;
  }
}

void layer_linear(const Layer& layer, const Matrix& x, Matrix& z) {
  if (const auto* dense = std::get_if<DenseLayer>(&layer)) {
    z.noalias() = dense->weight * x;
    z.colwise() += dense->bias;
    return;
  }
  const auto& conv = std::get<ConvLayer>(layer);
  const Eigen::Index hw = conv.height * conv.width;
  z.resize(static_cast<Eigen::Index>(conv.outputs()), x.cols());
  Matrix patches;
  for (Eigen::Index b = 0; b < x.cols(); ++b) {
    im2col(conv, x.col(b).data(), patches);
    Eigen::Map<Matrix> out(z.col(b).data(), hw, conv.out_channels);
    out.noalias() = patches * conv.kernel.transpose();
    out.rowwise() += conv.bias.transpose();
  }
}

void layer_backward(const Layer& layer, const Matrix& x, const Matrix& dz, ParamBlock& grad, Matrix* dx) {
  if (const auto* dense = std::get_if<DenseLayer>(&layer)) {
    grad.weight.noalias() += dz * x.transpose();
    grad.bias += dz.rowwise().sum();
    if (dx) dx->noalias() = dense->weight.transpose() * dz;
    return;
  }
  const auto& conv = std::get<ConvLayer>(layer);
  const Eigen::Index hw = conv.height * conv.width;
  if (dx) dx->setZero(x.rows(), x.cols());
  Matrix patches, dpatches;
  for (Eigen::Index b = 0; b < x.cols(); ++b) {
    im2col(conv, x.col(b).data(), patches);
    Eigen::Map<const Matrix> dout(dz.col(b).data(), hw, conv.out_channels);
    grad.weight.noalias() += dout.transpose() * patches;
    grad.bias += dout.colwise().sum().transpose();
    if (dx) {
      dpatches.noalias() = dout * conv.kernel;
      col2im_add(conv, dpatches, dx->col(b).data());
    }
  }
}

}  // namespace denot::nn::detail
