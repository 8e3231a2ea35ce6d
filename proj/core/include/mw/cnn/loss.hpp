#pragma once

#include <cmath>
#include <string>

#include "mw/cnn/tensor.hpp"
#include "mw/error.hpp"

namespace mw::cnn {

// Stable softmax of a 1-D logit vector.
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
  if (logits.rank() != 1 || logits.size() == 0) {
    throw UsageError("softmax: expected a non-empty 1-D logit vector");
  }
  Tensor<T> probs = logits;
  T mx = logits[0];
  for (std::size_t i = 1; i < logits.size(); ++i) {
    mx = std::max(mx, logits[i]);
  }
  T sum{};
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - mx);
    sum += probs[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] /= sum;
  }
  return probs;
}

// Sparse categorical cross-entropy: -log(probs[label]), the probability
// floored at 1e-12. `probs` must already be a distribution (sum within 1e-5).
template <typename T>
double scce_loss(const Tensor<T>& probs, int label) {
  if (probs.rank() != 1 || probs.size() == 0) {
    throw UsageError("scce_loss: expected a non-empty probability vector");
  }
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw UsageError("scce_loss: label " + std::to_string(label) + " out of range for " +
                     std::to_string(probs.size()) + " classes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    sum += static_cast<double>(probs[i]);
  }
  if (std::abs(sum - 1.0) > 1e-5) {
    throw UsageError("scce_loss: probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  double p = std::max(static_cast<double>(probs[label]), 1e-12);
  return -std::log(p);
}

}  // namespace mw::cnn
