#include "mw/cnn/metrics.hpp"

#include <string>

namespace mw::cnn {

Metrics metrics_from_confusion(std::vector<std::vector<long long>> confusion) {
  const int classes = static_cast<int>(confusion.size());
  if (classes == 0) {
    throw UsageError("metrics: empty confusion matrix");
  }
  for (const auto& row : confusion) {
    if (static_cast<int>(row.size()) != classes) {
      throw UsageError("metrics: confusion matrix must be square");
    }
  }
  Metrics m;
  m.confusion = std::move(confusion);
  m.precision.assign(classes, 0.0);
  m.recall.assign(classes, 0.0);
  m.f1.assign(classes, 0.0);

  long long correct = 0;
  for (int c = 0; c < classes; ++c) {
    for (int p = 0; p < classes; ++p) {
      m.total += m.confusion[c][p];
    }
    correct += m.confusion[c][c];
  }
  if (m.total == 0) {
    throw UsageError("metrics: confusion matrix holds no samples");
  }
  m.accuracy = static_cast<double>(correct) / m.total;

  for (int c = 0; c < classes; ++c) {
    long long col = 0, row = 0;
    for (int i = 0; i < classes; ++i) {
      col += m.confusion[i][c];
      row += m.confusion[c][i];
    }
    m.precision[c] = col == 0 ? 0.0 : static_cast<double>(m.confusion[c][c]) / col;
    m.recall[c] = row == 0 ? 0.0 : static_cast<double>(m.confusion[c][c]) / row;
    double pr = m.precision[c] + m.recall[c];
    m.f1[c] = pr == 0.0 ? 0.0 : 2.0 * m.precision[c] * m.recall[c] / pr;
    m.precision_macro += m.precision[c];
    m.recall_macro += m.recall[c];
    m.f1_macro += m.f1[c];
  }
  m.precision_macro /= classes;
  m.recall_macro /= classes;
  m.f1_macro /= classes;
  return m;
}

Metrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                        int classes) {
  if (truth.empty() || truth.size() != predicted.size()) {
    throw UsageError("metrics: truth and prediction lists must be non-empty and equal-sized");
  }
  if (classes < 1) {
    throw UsageError("metrics: class count must be positive");
  }
  std::vector<std::vector<long long>> confusion(classes, std::vector<long long>(classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    int t = truth[i], p = predicted[i];
    if (t < 0 || t >= classes || p < 0 || p >= classes) {
      throw UsageError("metrics: label " + std::to_string(t < 0 || t >= classes ? t : p) +
                       " out of range at sample " + std::to_string(i));
    }
    ++confusion[t][p];
  }
  return metrics_from_confusion(std::move(confusion));
}

}  // namespace mw::cnn
