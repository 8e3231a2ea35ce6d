#pragma once

#include <vector>

#include "mw/config.hpp"
#include "mw/flow.hpp"
#include "mw/mask.hpp"
#include "mw/timings.hpp"

namespace mw {

// Map a measured mean displacement to the next inter-sample gap in frames.
// Degenerate, zero or non-finite displacements (and mappings that round to
// zero) fall back to cfg.fallback_interval; everything else is rounded
// half-up and clamped into [cfg.interval_min, cfg.interval_max].
int sampling_interval(const FlowSummary& summary, const PipelineConfig& cfg);

// Walk the mask sequence at a speed-adaptive stride. Sampling starts at the
// first mask with any foreground; at each emitted sample t the displacement
// between masks t-d and t decides how far to jump (fallback while t < d).
// Purely deterministic.
std::vector<ForegroundMask> adaptive_sample(const std::vector<ForegroundMask>& masks,
                                            const PipelineConfig& cfg,
                                            StageTimings* timings = nullptr);

struct TrimResult {
  std::vector<ForegroundMask> samples;
  // Set when the sequence was too short to trim and came back unchanged.
  bool degenerate = false;
};

// Drop trim_count samples from each end (start/end of an activity carry
// little motion information). Sequences of length <= 2*trim_count are
// returned unchanged with the degenerate flag raised.
TrimResult trim_samples(std::vector<ForegroundMask> samples, int trim_count);

}  // namespace mw
