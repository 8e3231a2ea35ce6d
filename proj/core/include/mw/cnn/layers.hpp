#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "mw/cnn/gemm.hpp"
#include "mw/cnn/tensor.hpp"
#include "mw/error.hpp"

namespace mw::cnn {

// Single-sample layer with cached activations. forward() must precede
// backward(); parameter layers expose their weights and accumulated
// gradients (gradients sum across samples until zero_grads()).
template <typename T>
class Layer {
public:
  virtual ~Layer() = default;

  virtual std::string name() const = 0;
  virtual Tensor<T> forward(const Tensor<T>& input) = 0;
  virtual Tensor<T> backward(const Tensor<T>& grad_out) = 0;

  virtual std::vector<Tensor<T>*> params() { return {}; }
  virtual std::vector<Tensor<T>*> grads() { return {}; }

  void zero_grads() {
    for (Tensor<T>* g : grads()) {
      g->fill(T{});
    }
  }
};

// 2-D cross-correlation over [C,H,W] tensors, implemented as im2col + GEMM.
// Weights are [F, C, k, k]; output is [F, OH, OW] with
// OH = floor((H + 2*pad - k) / stride) + 1.
template <typename T>
class Conv2d final : public Layer<T> {
public:
  Conv2d(int in_channels, int out_channels, int kernel, int stride, int pad)
      : in_channels_(in_channels),
        out_channels_(out_channels),
        kernel_(kernel),
        stride_(stride),
        pad_(pad),
        weight(std::vector<int>{out_channels, in_channels, kernel, kernel}),
        bias(std::vector<int>{out_channels}),
        grad_weight(weight.shape),
        grad_bias(bias.shape) {
    if (in_channels < 1 || out_channels < 1 || kernel < 1 || stride < 1 || pad < 0) {
      throw UsageError("conv2d: bad layer geometry");
    }
  }

  std::string name() const override { return "conv" + std::to_string(kernel_) + "x" + std::to_string(kernel_); }

  static int out_extent(int in, int kernel, int stride, int pad) {
    return (in + 2 * pad - kernel) / stride + 1;
  }

  Tensor<T> forward(const Tensor<T>& input) override {
    if (input.rank() != 3 || input.dim(0) != in_channels_) {
      throw UsageError("conv2d: expected input (" + std::to_string(in_channels_) +
                       ",H,W), got " + shape_string(input.shape));
    }
    in_h_ = input.dim(1);
    in_w_ = input.dim(2);
    if (in_h_ + 2 * pad_ < kernel_ || in_w_ + 2 * pad_ < kernel_) {
      throw UsageError("conv2d: kernel larger than padded input");
    }
    out_h_ = out_extent(in_h_, kernel_, stride_, pad_);
    out_w_ = out_extent(in_w_, kernel_, stride_, pad_);

    const int k_rows = in_channels_ * kernel_ * kernel_;
    const int patches = out_h_ * out_w_;
    col_.assign(static_cast<std::size_t>(k_rows) * patches, T{});

    // im2col: one row per (channel, ky, kx), one column per output pixel.
    const T* in = input.data.data();
    for (int c = 0; c < in_channels_; ++c) {
      const T* plane = in + static_cast<std::size_t>(c) * in_h_ * in_w_;
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx) {
          T* row = col_.data() +
                   (static_cast<std::size_t>(c) * kernel_ * kernel_ + ky * kernel_ + kx) * patches;
          for (int oy = 0; oy < out_h_; ++oy) {
            int sy = oy * stride_ - pad_ + ky;
            if (sy < 0 || sy >= in_h_) {
              continue;  // row stays zero
            }
            const T* src = plane + static_cast<std::size_t>(sy) * in_w_;
            T* dst = row + static_cast<std::size_t>(oy) * out_w_;
            for (int ox = 0; ox < out_w_; ++ox) {
              int sx = ox * stride_ - pad_ + kx;
              if (sx >= 0 && sx < in_w_) {
                dst[ox] = src[sx];
              }
            }
          }
        }
      }
    }

    Tensor<T> out(std::vector<int>{out_channels_, out_h_, out_w_});
    for (int f = 0; f < out_channels_; ++f) {
      T* dst = out.data.data() + static_cast<std::size_t>(f) * patches;
      std::fill(dst, dst + patches, bias[f]);
    }
    gemm(out_channels_, patches, k_rows, weight.data.data(), col_.data(), out.data.data());
    has_cache_ = true;
    return out;
  }

  Tensor<T> backward(const Tensor<T>& grad_out) override {
    if (!has_cache_) {
      throw UsageError("conv2d: backward before forward");
    }
    const int patches = out_h_ * out_w_;
    const int k_rows = in_channels_ * kernel_ * kernel_;
    if (grad_out.shape != std::vector<int>{out_channels_, out_h_, out_w_}) {
      throw UsageError("conv2d: gradient shape mismatch " + shape_string(grad_out.shape));
    }
    const T* gout = grad_out.data.data();

    for (int f = 0; f < out_channels_; ++f) {
      T s{};
      const T* row = gout + static_cast<std::size_t>(f) * patches;
      for (int p = 0; p < patches; ++p) {
        s += row[p];
      }
      grad_bias[f] += s;
    }

    // dW = gout * col^T, computed transposed so both GEMMs run in the same
    // cache-friendly row-block form, then folded into the [F, K] gradient.
    scratch_gout_t_.assign(static_cast<std::size_t>(patches) * out_channels_, T{});
    transpose(out_channels_, patches, gout, scratch_gout_t_.data());
    scratch_dwt_.assign(static_cast<std::size_t>(k_rows) * out_channels_, T{});
    gemm(k_rows, out_channels_, patches, col_.data(), scratch_gout_t_.data(),
         scratch_dwt_.data());
    for (int f = 0; f < out_channels_; ++f) {
      T* grow = grad_weight.data.data() + static_cast<std::size_t>(f) * k_rows;
      for (int k = 0; k < k_rows; ++k) {
        grow[k] += scratch_dwt_[static_cast<std::size_t>(k) * out_channels_ + f];
      }
    }

    // dcol = W^T * gout, then scatter back to input coordinates.
    scratch_wt_.assign(static_cast<std::size_t>(k_rows) * out_channels_, T{});
    transpose(out_channels_, k_rows, weight.data.data(), scratch_wt_.data());
    scratch_dcol_.assign(static_cast<std::size_t>(k_rows) * patches, T{});
    gemm(k_rows, patches, out_channels_, scratch_wt_.data(), gout, scratch_dcol_.data());

    Tensor<T> grad_in(std::vector<int>{in_channels_, in_h_, in_w_});
    T* gin = grad_in.data.data();
    for (int c = 0; c < in_channels_; ++c) {
      T* plane = gin + static_cast<std::size_t>(c) * in_h_ * in_w_;
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx) {
          const T* row = scratch_dcol_.data() +
                         (static_cast<std::size_t>(c) * kernel_ * kernel_ + ky * kernel_ + kx) *
                             patches;
          for (int oy = 0; oy < out_h_; ++oy) {
            int sy = oy * stride_ - pad_ + ky;
            if (sy < 0 || sy >= in_h_) {
              continue;
            }
            T* dst = plane + static_cast<std::size_t>(sy) * in_w_;
            const T* src = row + static_cast<std::size_t>(oy) * out_w_;
            for (int ox = 0; ox < out_w_; ++ox) {
              int sx = ox * stride_ - pad_ + kx;
              if (sx >= 0 && sx < in_w_) {
                dst[sx] += src[ox];
              }
            }
          }
        }
      }
    }
    return grad_in;
  }

  std::vector<Tensor<T>*> params() override { return {&weight, &bias}; }
  std::vector<Tensor<T>*> grads() override { return {&grad_weight, &grad_bias}; }

  int in_channels() const { return in_channels_; }
  int out_channels() const { return out_channels_; }
  int kernel() const { return kernel_; }
  int stride() const { return stride_; }
  int pad() const { return pad_; }

  Tensor<T> weight;
  Tensor<T> bias;
  Tensor<T> grad_weight;
  Tensor<T> grad_bias;

private:
  int in_channels_, out_channels_, kernel_, stride_, pad_;
  int in_h_ = 0, in_w_ = 0, out_h_ = 0, out_w_ = 0;
  bool has_cache_ = false;
  std::vector<T> col_;
  std::vector<T> scratch_gout_t_, scratch_dwt_, scratch_wt_, scratch_dcol_;
};

// Max pooling over [C,H,W]; gradient routes to the first maximal element of
// each window (row-major scan order breaks ties).
template <typename T>
class MaxPool final : public Layer<T> {
public:
  MaxPool(int window, int stride) : window_(window), stride_(stride) {
    if (window < 1 || stride < 1) {
      throw UsageError("maxpool: window and stride must be positive");
    }
  }

  std::string name() const override { return "maxpool" + std::to_string(window_); }

  Tensor<T> forward(const Tensor<T>& input) override {
    if (input.rank() != 3) {
      throw UsageError("maxpool: expected (C,H,W) input, got " + shape_string(input.shape));
    }
    in_shape_ = input.shape;
    const int c = input.dim(0), h = input.dim(1), w = input.dim(2);
    if (window_ > h || window_ > w) {
      throw UsageError("maxpool: window " + std::to_string(window_) +
                       " larger than input " + shape_string(input.shape));
    }
    const int oh = (h - window_) / stride_ + 1;
    const int ow = (w - window_) / stride_ + 1;
    Tensor<T> out(std::vector<int>{c, oh, ow});
    argmax_.resize(out.size());
    const T* in = input.data.data();
    std::size_t o = 0;
    for (int ch = 0; ch < c; ++ch) {
      const T* plane = in + static_cast<std::size_t>(ch) * h * w;
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox, ++o) {
          int sy = oy * stride_, sx = ox * stride_;
          std::size_t best = static_cast<std::size_t>(sy) * w + sx;
          T best_v = plane[best];
          for (int ky = 0; ky < window_; ++ky) {
            const T* row = plane + static_cast<std::size_t>(sy + ky) * w + sx;
            for (int kx = 0; kx < window_; ++kx) {
              if (row[kx] > best_v) {
                best_v = row[kx];
                best = static_cast<std::size_t>(sy + ky) * w + sx + kx;
              }
            }
          }
          out[o] = best_v;
          argmax_[o] = static_cast<std::size_t>(ch) * h * w + best;
        }
      }
    }
    return out;
  }

  Tensor<T> backward(const Tensor<T>& grad_out) override {
    if (in_shape_.empty()) {
      throw UsageError("maxpool: backward before forward");
    }
    if (grad_out.size() != argmax_.size()) {
      throw UsageError("maxpool: gradient shape mismatch");
    }
    Tensor<T> grad_in(in_shape_);
    for (std::size_t i = 0; i < argmax_.size(); ++i) {
      grad_in[argmax_[i]] += grad_out[i];
    }
    return grad_in;
  }

  int window() const { return window_; }
  int stride() const { return stride_; }

private:
  int window_, stride_;
  std::vector<int> in_shape_;
  std::vector<std::size_t> argmax_;
};

// Elementwise tanh; any shape.
template <typename T>
class TanhLayer final : public Layer<T> {
public:
  std::string name() const override { return "tanh"; }

  Tensor<T> forward(const Tensor<T>& input) override {
    out_ = input;
    for (std::size_t i = 0; i < out_.size(); ++i) {
      out_[i] = std::tanh(input[i]);
    }
    return out_;
  }

  Tensor<T> backward(const Tensor<T>& grad_out) override {
    if (!grad_out.same_shape(out_)) {
      throw UsageError("tanh: gradient shape mismatch");
    }
    Tensor<T> grad_in(out_.shape);
    for (std::size_t i = 0; i < out_.size(); ++i) {
      grad_in[i] = grad_out[i] * (T{1} - out_[i] * out_[i]);
    }
    return grad_in;
  }

private:
  Tensor<T> out_;
};

// Collapse any input to one dimension (and restore it on the way back).
template <typename T>
class Flatten final : public Layer<T> {
public:
  std::string name() const override { return "flatten"; }

  Tensor<T> forward(const Tensor<T>& input) override {
    in_shape_ = input.shape;
    Tensor<T> out;
    out.shape = {static_cast<int>(input.size())};
    out.data = input.data;
    return out;
  }

  Tensor<T> backward(const Tensor<T>& grad_out) override {
    if (in_shape_.empty() || grad_out.size() != numel(in_shape_)) {
      throw UsageError("flatten: gradient shape mismatch");
    }
    Tensor<T> grad_in;
    grad_in.shape = in_shape_;
    grad_in.data = grad_out.data;
    return grad_in;
  }

private:
  std::vector<int> in_shape_;
};

// Fully connected map of a 1-D vector: y = W x + b, weights [out, in].
template <typename T>
class Dense final : public Layer<T> {
public:
  Dense(int in_features, int out_features)
      : in_features_(in_features),
        out_features_(out_features),
        weight(std::vector<int>{out_features, in_features}),
        bias(std::vector<int>{out_features}),
        grad_weight(weight.shape),
        grad_bias(bias.shape) {
    if (in_features < 1 || out_features < 1) {
      throw UsageError("dense: feature counts must be positive");
    }
  }

  std::string name() const override { return "dense" + std::to_string(out_features_); }

  Tensor<T> forward(const Tensor<T>& input) override {
    if (input.rank() != 1 || input.dim(0) != in_features_) {
      throw UsageError("dense: expected (" + std::to_string(in_features_) + ") input, got " +
                       shape_string(input.shape));
    }
    in_ = input;
    Tensor<T> out(std::vector<int>{out_features_});
    for (int o = 0; o < out_features_; ++o) {
      out[o] = dot(weight.data.data() + static_cast<std::size_t>(o) * in_features_,
                   input.data.data(), in_features_) +
               bias[o];
    }
    return out;
  }

  Tensor<T> backward(const Tensor<T>& grad_out) override {
    if (in_.size() == 0) {
      throw UsageError("dense: backward before forward");
    }
    if (grad_out.shape != std::vector<int>{out_features_}) {
      throw UsageError("dense: gradient shape mismatch");
    }
    Tensor<T> grad_in(std::vector<int>{in_features_});
    for (int o = 0; o < out_features_; ++o) {
      T g = grad_out[o];
      grad_bias[o] += g;
      axpy(in_features_, g, in_.data.data(),
           grad_weight.data.data() + static_cast<std::size_t>(o) * in_features_);
      axpy(in_features_, g, weight.data.data() + static_cast<std::size_t>(o) * in_features_,
           grad_in.data.data());
    }
    return grad_in;
  }

  std::vector<Tensor<T>*> params() override { return {&weight, &bias}; }
  std::vector<Tensor<T>*> grads() override { return {&grad_weight, &grad_bias}; }

  int in_features() const { return in_features_; }
  int out_features() const { return out_features_; }

  Tensor<T> weight;
  Tensor<T> bias;
  Tensor<T> grad_weight;
  Tensor<T> grad_bias;

private:
  int in_features_, out_features_;
  Tensor<T> in_;
};

// Softmax over a 1-D vector, max-subtracted for stability. The backward
// pass applies the full Jacobian: dx_i = y_i (g_i - sum_j g_j y_j).
template <typename T>
class Softmax final : public Layer<T> {
public:
  std::string name() const override { return "softmax"; }

  Tensor<T> forward(const Tensor<T>& input) override {
    if (input.rank() != 1) {
      throw UsageError("softmax: expected a 1-D input, got " + shape_string(input.shape));
    }
    out_ = input;
    T mx = input[0];
    for (std::size_t i = 1; i < input.size(); ++i) {
      mx = std::max(mx, input[i]);
    }
    T sum{};
    for (std::size_t i = 0; i < input.size(); ++i) {
      out_[i] = std::exp(input[i] - mx);
      sum += out_[i];
    }
    for (std::size_t i = 0; i < input.size(); ++i) {
      out_[i] /= sum;
    }
    return out_;
  }

  Tensor<T> backward(const Tensor<T>& grad_out) override {
    if (!grad_out.same_shape(out_)) {
      throw UsageError("softmax: gradient shape mismatch");
    }
    T inner{};
    for (std::size_t i = 0; i < out_.size(); ++i) {
      inner += grad_out[i] * out_[i];
    }
    Tensor<T> grad_in(out_.shape);
    for (std::size_t i = 0; i < out_.size(); ++i) {
      grad_in[i] = out_[i] * (grad_out[i] - inner);
    }
    return grad_in;
  }

private:
  Tensor<T> out_;
};

}  // namespace mw::cnn
