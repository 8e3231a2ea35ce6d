#pragma once

#include <vector>

#include "mw/cnn/network.hpp"
#include "mw/error.hpp"

namespace mw::cnn {

// Classification quality summary. Confusion rows are ground truth, columns
// predictions; precision for class c divides the diagonal by the column sum
// (0 when the class was never predicted), recall by the row sum, and f1 is
// their harmonic mean.
struct Metrics {
  std::vector<std::vector<long long>> confusion;
  long long total = 0;
  double accuracy = 0.0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
};

// Build metrics from parallel truth/prediction vectors.
Metrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                        int classes);

// Derive the scalar scores from an existing confusion matrix.
Metrics metrics_from_confusion(std::vector<std::vector<long long>> confusion);

// Argmax-classify every example and score the result.
template <typename T>
Metrics evaluate(Network<T>& net, const std::vector<Example<T>>& examples) {
  if (examples.empty()) {
    throw UsageError("evaluate: no examples");
  }
  std::vector<int> truth, predicted;
  truth.reserve(examples.size());
  predicted.reserve(examples.size());
  for (const Example<T>& ex : examples) {
    truth.push_back(ex.label);
    predicted.push_back(net.predict(ex.input));
  }
  return compute_metrics(truth, predicted, net.config().classes);
}

}  // namespace mw::cnn
