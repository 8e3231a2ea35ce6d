#pragma once

#include "mw/accumulate.hpp"
#include "mw/config.hpp"
#include "mw/frame.hpp"
#include "mw/timings.hpp"

namespace mw {

// Full video -> representation pipeline: silhouettes, adaptive sampling,
// optional end-trimming (training runs only), weighted accumulation. The
// result is deterministic given cfg.rng_seed. Raises EmptyActivityError
// when the stream yields no usable activity samples.
RepresentationImage represent(FrameStream& stream, const PipelineConfig& cfg, bool training_mode,
                              StageTimings* timings = nullptr);

}  // namespace mw
