#include "mw/sampler.hpp"

#include <chrono>
#include <cmath>

#include "mw/error.hpp"

namespace mw {

int sampling_interval(const FlowSummary& summary, const PipelineConfig& cfg) {
  cfg.validate();
  if (summary.degenerate || summary.s == 0.0 || !std::isfinite(summary.s)) {
    return cfg.fallback_interval;
  }
  double mapped = cfg.interval_mode == IntervalMode::direct
                      ? summary.s
                      : cfg.inverse_scale / summary.s;
  if (!std::isfinite(mapped)) {
    return cfg.fallback_interval;
  }
  auto rounded = static_cast<long long>(std::floor(mapped + 0.5));  // half rounds up
  if (rounded <= 0) {
    return cfg.fallback_interval;
  }
  if (rounded < cfg.interval_min) {
    return cfg.interval_min;
  }
  if (rounded > cfg.interval_max) {
    return cfg.interval_max;
  }
  return static_cast<int>(rounded);
}

std::vector<ForegroundMask> adaptive_sample(const std::vector<ForegroundMask>& masks,
                                            const PipelineConfig& cfg, StageTimings* timings) {
  cfg.validate();
  std::vector<ForegroundMask> samples;

  std::size_t start = 0;
  while (start < masks.size() && !masks[start].any_foreground()) {
    ++start;
  }
  if (start == masks.size()) {
    return samples;
  }

  const std::size_t d = static_cast<std::size_t>(cfg.flow_frame_distance);
  std::size_t t = start;
  while (t < masks.size()) {
    samples.push_back(masks[t]);
    int gap;
    if (t < d) {
      gap = cfg.fallback_interval;  // no earlier mask to measure against yet
    } else if (timings) {
      auto t0 = std::chrono::steady_clock::now();
      FlowField field = dense_flow(masks[t - d], masks[t], cfg.flow_window, cfg.eigen_threshold);
      FlowSummary summary = summarize_flow(field, cfg.flow_stats);
      timings->flow_seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      gap = sampling_interval(summary, cfg);
    } else {
      FlowField field = dense_flow(masks[t - d], masks[t], cfg.flow_window, cfg.eigen_threshold);
      gap = sampling_interval(summarize_flow(field, cfg.flow_stats), cfg);
    }
    t += static_cast<std::size_t>(gap);
  }
  return samples;
}

TrimResult trim_samples(std::vector<ForegroundMask> samples, int trim_count) {
  if (trim_count < 0) {
    throw UsageError("trim count must be >= 0");
  }
  TrimResult result;
  if (trim_count == 0) {
    result.samples = std::move(samples);
    return result;
  }
  if (samples.size() <= 2 * static_cast<std::size_t>(trim_count)) {
    result.samples = std::move(samples);
    result.degenerate = true;
    return result;
  }
  result.samples.assign(samples.begin() + trim_count, samples.end() - trim_count);
  return result;
}

}  // namespace mw
