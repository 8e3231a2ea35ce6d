#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mw/cnn/init.hpp"
#include "mw/cnn/layers.hpp"
#include "mw/cnn/loss.hpp"
#include "mw/rng.hpp"

namespace mw::cnn {

// One conv stage: convolution -> tanh -> max pool.
struct ConvBlockSpec {
  int filters = 0;
  int kernel = 0;
  int stride = 1;
  int pad = 0;
  int pool_window = 0;  // 0 disables the pool
  int pool_stride = 0;
};

// Shape of one layer's output while walking the model chain.
struct LayerShape {
  std::string layer;
  std::vector<int> shape;
};

struct ModelConfig {
  int in_channels = 1;
  int in_h = 227;
  int in_w = 227;
  std::vector<ConvBlockSpec> blocks;
  std::vector<int> dense_widths;  // hidden widths; the classifier layer is separate
  int classes = 2;

  // Walk the chain and return every intermediate shape; throws UsageError
  // if any stage is inconsistent (kernel exceeding input, empty output...).
  std::vector<LayerShape> shape_chain() const;
  void validate() const { shape_chain(); }
};

// The grayscale AlexNet-style classifier: five conv/tanh/pool stages with
// filter counts 96/256/384/384/256, then dense 4096 -> 4096 -> classes.
// 227x227 input collapses to a 256-vector before the head.
inline ModelConfig alexnet_config(int classes) {
  ModelConfig cfg;
  cfg.in_channels = 1;
  cfg.in_h = 227;
  cfg.in_w = 227;
  cfg.blocks = {
      {96, 11, 4, 0, 3, 2},   // 227 -> 55 -> 27
      {256, 5, 1, 2, 3, 2},   // 27 -> 27 -> 13
      {384, 3, 1, 1, 3, 2},   // 13 -> 13 -> 6
      {384, 3, 1, 1, 3, 2},   // 6 -> 6 -> 2
      {256, 3, 1, 1, 2, 2},   // 2 -> 2 -> 1
  };
  cfg.dense_widths = {4096, 4096};
  cfg.classes = classes;
  return cfg;
}

inline std::vector<LayerShape> ModelConfig::shape_chain() const {
  if (in_channels < 1 || in_h < 1 || in_w < 1) {
    throw UsageError("model: input dimensions must be positive");
  }
  if (classes < 2) {
    throw UsageError("model: need at least two classes");
  }
  std::vector<LayerShape> chain;
  chain.push_back({"input", {in_channels, in_h, in_w}});
  int c = in_channels, h = in_h, w = in_w;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const ConvBlockSpec& b = blocks[i];
    if (b.filters < 1 || b.kernel < 1 || b.stride < 1 || b.pad < 0) {
      throw UsageError("model: bad conv block " + std::to_string(i));
    }
    if (h + 2 * b.pad < b.kernel || w + 2 * b.pad < b.kernel) {
      throw UsageError("model: conv kernel exceeds input at block " + std::to_string(i));
    }
    h = Conv2d<float>::out_extent(h, b.kernel, b.stride, b.pad);
    w = Conv2d<float>::out_extent(w, b.kernel, b.stride, b.pad);
    c = b.filters;
    if (h < 1 || w < 1) {
      throw UsageError("model: empty conv output at block " + std::to_string(i));
    }
    chain.push_back({"conv" + std::to_string(i + 1), {c, h, w}});
    if (b.pool_window > 0) {
      if (b.pool_stride < 1) {
        throw UsageError("model: bad pool stride at block " + std::to_string(i));
      }
      if (b.pool_window > h || b.pool_window > w) {
        throw UsageError("model: pool window exceeds input at block " + std::to_string(i));
      }
      h = (h - b.pool_window) / b.pool_stride + 1;
      w = (w - b.pool_window) / b.pool_stride + 1;
      chain.push_back({"pool" + std::to_string(i + 1), {c, h, w}});
    }
  }
  int features = c * h * w;
  chain.push_back({"flatten", {features}});
  for (std::size_t i = 0; i < dense_widths.size(); ++i) {
    if (dense_widths[i] < 1) {
      throw UsageError("model: dense width must be positive");
    }
    features = dense_widths[i];
    chain.push_back({"dense" + std::to_string(i + 1), {features}});
  }
  chain.push_back({"logits", {classes}});
  return chain;
}

// A stack of layers ending in class logits. Parameters are initialized
// Glorot-normal from per-tensor streams derived from `seed`; biases start
// at zero. probabilities() appends the softmax.
template <typename T>
class Network {
public:
  explicit Network(ModelConfig config, std::uint64_t seed = 0) : config_(std::move(config)) {
    config_.validate();
    int c = config_.in_channels, h = config_.in_h, w = config_.in_w;
    int index = 0;
    for (const ConvBlockSpec& b : config_.blocks) {
      auto conv = std::make_unique<Conv2d<T>>(c, b.filters, b.kernel, b.stride, b.pad);
      int fan_in = c * b.kernel * b.kernel;
      int fan_out = b.filters * b.kernel * b.kernel;
      Rng rng(derive_seed(seed, "conv" + std::to_string(index) + ".weight"));
      glorot_normal_fill(conv->weight, fan_in, fan_out, rng);
      h = Conv2d<T>::out_extent(h, b.kernel, b.stride, b.pad);
      w = Conv2d<T>::out_extent(w, b.kernel, b.stride, b.pad);
      c = b.filters;
      layers_.push_back(std::move(conv));
      layers_.push_back(std::make_unique<TanhLayer<T>>());
      if (b.pool_window > 0) {
        layers_.push_back(std::make_unique<MaxPool<T>>(b.pool_window, b.pool_stride));
        h = (h - b.pool_window) / b.pool_stride + 1;
        w = (w - b.pool_window) / b.pool_stride + 1;
      }
      ++index;
    }
    layers_.push_back(std::make_unique<Flatten<T>>());
    int features = c * h * w;
    index = 0;
    for (int width : config_.dense_widths) {
      auto dense = std::make_unique<Dense<T>>(features, width);
      Rng rng(derive_seed(seed, "dense" + std::to_string(index) + ".weight"));
      glorot_normal_fill(dense->weight, features, width, rng);
      layers_.push_back(std::move(dense));
      layers_.push_back(std::make_unique<TanhLayer<T>>());
      features = width;
      ++index;
    }
    auto head = std::make_unique<Dense<T>>(features, config_.classes);
    Rng rng(derive_seed(seed, "head.weight"));
    glorot_normal_fill(head->weight, features, config_.classes, rng);
    layers_.push_back(std::move(head));
  }

  const ModelConfig& config() const { return config_; }

  // Class logits for one input sample.
  Tensor<T> forward(const Tensor<T>& input) {
    Tensor<T> x = input;
    for (auto& layer : layers_) {
      x = layer->forward(x);
    }
    return x;
  }

  Tensor<T> probabilities(const Tensor<T>& input) { return softmax(forward(input)); }

  int predict(const Tensor<T>& input) {
    Tensor<T> logits = forward(input);
    int best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i) {
      if (logits[i] > logits[best]) {
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  // Propagate a logit gradient down the stack, accumulating parameter
  // gradients along the way.
  void backward(const Tensor<T>& grad_logits) {
    Tensor<T> g = grad_logits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      g = (*it)->backward(g);
    }
  }

  std::vector<Tensor<T>*> params() {
    std::vector<Tensor<T>*> out;
    for (auto& layer : layers_) {
      for (Tensor<T>* p : layer->params()) {
        out.push_back(p);
      }
    }
    return out;
  }

  std::vector<Tensor<T>*> grads() {
    std::vector<Tensor<T>*> out;
    for (auto& layer : layers_) {
      for (Tensor<T>* g : layer->grads()) {
        out.push_back(g);
      }
    }
    return out;
  }

  void zero_grads() {
    for (auto& layer : layers_) {
      layer->zero_grads();
    }
  }

  // Stable parameter names ("conv1.weight", "dense2.bias", "head.weight"...)
  // paired with the tensors, used by the checkpoint container.
  std::vector<std::pair<std::string, Tensor<T>*>> named_params() {
    std::vector<std::pair<std::string, Tensor<T>*>> out;
    int conv = 0, dense = 0;
    const int hidden = static_cast<int>(config_.dense_widths.size());
    for (auto& layer : layers_) {
      auto ps = layer->params();
      if (ps.empty()) {
        continue;
      }
      std::string base;
      if (dynamic_cast<Conv2d<T>*>(layer.get())) {
        base = "conv" + std::to_string(++conv);
      } else {
        ++dense;
        base = dense <= hidden ? "dense" + std::to_string(dense) : "head";
      }
      out.emplace_back(base + ".weight", ps[0]);
      out.emplace_back(base + ".bias", ps[1]);
    }
    return out;
  }

  const std::vector<std::unique_ptr<Layer<T>>>& layers() const { return layers_; }

private:
  ModelConfig config_;
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

// Labeled input sample, already normalized for the network.
template <typename T>
struct Example {
  Tensor<T> input;
  int label = 0;
};

}  // namespace mw::cnn
