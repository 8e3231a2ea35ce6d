#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mw/cnn/loss.hpp"
#include "mw/cnn/metrics.hpp"
#include "mw/cnn/network.hpp"
#include "mw/cnn/sgd.hpp"
#include "mw/error.hpp"
#include "mw/rng.hpp"

namespace mw::cnn {

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 30;
  std::uint64_t seed = 0;
  int early_stop_patience = 5;

  // Interface-boundary validation (config files, CLI) insists on a positive
  // learning rate; train() itself tolerates 0 so a zero step provably leaves
  // parameters untouched.
  void validate() const {
    if (!(learning_rate > 0.0)) {
      throw UsageError("learning rate must be positive");
    }
    validate_relaxed();
  }
  void validate_relaxed() const {
    if (learning_rate < 0.0 || !std::isfinite(learning_rate)) {
      throw UsageError("learning rate must be finite and >= 0");
    }
    if (momentum < 0.0 || momentum >= 1.0) {
      throw UsageError("momentum must lie in [0, 1)");
    }
    if (batch_size < 1) {
      throw UsageError("batch size must be >= 1");
    }
    if (epochs < 1) {
      throw UsageError("epoch count must be >= 1");
    }
    if (early_stop_patience < 1) {
      throw UsageError("early-stop patience must be >= 1");
    }
  }
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  std::vector<EpochLog> log;
  int best_epoch = -1;
  double best_val_loss = std::numeric_limits<double>::infinity();
  bool early_stopped = false;
};

// Write the per-epoch log in the fixed CSV layout.
inline void write_training_log(const std::filesystem::path& path,
                               const std::vector<EpochLog>& log) {
  std::ofstream out(path);
  if (!out) {
    throw RuntimeError("cannot open for writing: " + path.string());
  }
  out << "epoch,train_loss,val_loss,val_acc\n";
  char line[160];
  for (const EpochLog& e : log) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f\n", e.epoch, e.train_loss, e.val_loss,
                  e.val_acc);
    out << line;
  }
  if (!out) {
    throw RuntimeError("failed writing training log to " + path.string());
  }
}

// Mini-batch SGD with momentum over the (already normalized) train split,
// validated once per epoch. Runs strictly single-threaded in sample order
// after a seeded shuffle, so fixed seeds give bit-stable loss curves.
// Training stops early after `early_stop_patience` epochs without a new
// best validation loss, and the best-epoch parameters are restored before
// returning. A non-finite batch loss aborts with a diagnostic.
template <typename T>
TrainResult train(Network<T>& net, const std::vector<Example<T>>& train_set,
                  const std::vector<Example<T>>& val_set, const TrainConfig& tc) {
  tc.validate_relaxed();
  if (train_set.empty() || val_set.empty()) {
    throw UsageError("train: train and validation splits must be non-empty");
  }
  for (const Example<T>& ex : train_set) {
    if (ex.label < 0 || ex.label >= net.config().classes) {
      throw UsageError("train: label " + std::to_string(ex.label) + " out of range");
    }
  }

  TrainResult result;
  std::vector<Tensor<T>> velocity;
  std::vector<std::vector<T>> best_params;
  int epochs_without_improvement = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(tc.seed, "epoch" + std::to_string(epoch)));
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      std::size_t batch_end = std::min(order.size(), cursor + static_cast<std::size_t>(tc.batch_size));
      const double inv_batch = 1.0 / static_cast<double>(batch_end - cursor);
      net.zero_grads();
      double batch_loss = 0.0;
      for (std::size_t b = cursor; b < batch_end; ++b) {
        const Example<T>& ex = train_set[order[b]];
        Tensor<T> probs = softmax(net.forward(ex.input));
        batch_loss += scce_loss(probs, ex.label);
        // Combined softmax+cross-entropy gradient at the logits.
        Tensor<T> grad = probs;
        grad[ex.label] -= T{1};
        for (std::size_t i = 0; i < grad.size(); ++i) {
          grad[i] *= static_cast<T>(inv_batch);
        }
        net.backward(grad);
      }
      if (!std::isfinite(batch_loss)) {
        throw RuntimeError("training diverged: non-finite loss in epoch " +
                           std::to_string(epoch) + " at sample offset " + std::to_string(cursor));
      }
      epoch_loss += batch_loss;
      sgd_step(net.params(), net.grads(), velocity, tc.learning_rate, tc.momentum);
      cursor = batch_end;
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / static_cast<double>(train_set.size());

    double val_loss = 0.0;
    long long val_correct = 0;
    for (const Example<T>& ex : val_set) {
      Tensor<T> probs = net.probabilities(ex.input);
      val_loss += scce_loss(probs, ex.label);
      int best = 0;
      for (std::size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) {
          best = static_cast<int>(i);
        }
      }
      if (best == ex.label) {
        ++val_correct;
      }
    }
    entry.val_loss = val_loss / static_cast<double>(val_set.size());
    entry.val_acc = static_cast<double>(val_correct) / static_cast<double>(val_set.size());
    result.log.push_back(entry);

    if (entry.val_loss < result.best_val_loss) {
      result.best_val_loss = entry.val_loss;
      result.best_epoch = epoch;
      epochs_without_improvement = 0;
      best_params.clear();
      for (Tensor<T>* p : net.params()) {
        best_params.push_back(p->data);
      }
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement >= tc.early_stop_patience) {
        result.early_stopped = true;
        break;
      }
    }
  }

  if (!best_params.empty()) {
    auto params = net.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i]->data = best_params[i];
    }
  }
  return result;
}

}  // namespace mw::cnn
