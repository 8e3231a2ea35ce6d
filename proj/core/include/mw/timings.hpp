#pragma once

namespace mw {

// Accumulated wall time per pipeline stage, filled in by processing calls
// when a collector is supplied (benchmarks use this; normal runs pass
// nullptr and skip the clock reads).
struct StageTimings {
  double blur_seconds = 0.0;
  double background_seconds = 0.0;
  double morphology_seconds = 0.0;
  double flow_seconds = 0.0;
  double accumulate_seconds = 0.0;
  long long frames = 0;
};

}  // namespace mw
