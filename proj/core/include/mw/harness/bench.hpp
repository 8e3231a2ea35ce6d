#pragma once

#include <string>
#include <vector>

#include "mw/config.hpp"
#include "mw/frame.hpp"

namespace mw::harness {

struct StageMean {
  std::string stage;
  double mean_ms = 0.0;  // mean milliseconds per input frame
};

struct BenchReport {
  int frames_processed = 0;
  double wall_seconds = 0.0;  // median pass over all repeats
  double fps = 0.0;           // frames_processed / wall_seconds
  std::vector<StageMean> stage_breakdown;
  double classifier_ms = 0.0;  // forward pass per representation, timed apart
};

// Measures end-to-end representation throughput. The stream (>= 300
// frames) is drained once and replayed: one warm-up pass is discarded,
// then `repeat` timed passes run and the median-wall pass is reported,
// so fps and the stage breakdown come from the same coherent run.
// Classifier inference is timed separately on the produced
// representation and never counts toward fps. Single-threaded.
BenchReport run_bench(FrameStream& stream, const PipelineConfig& cfg, int repeat);

}  // namespace mw::harness
