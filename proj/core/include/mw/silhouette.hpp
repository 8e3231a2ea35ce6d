#pragma once

#include <vector>

#include "mw/config.hpp"
#include "mw/frame.hpp"
#include "mw/knn_bg.hpp"
#include "mw/mask.hpp"
#include "mw/timings.hpp"

namespace mw {

// Per-stream silhouette extractor: Gaussian blur, background subtraction,
// then a small opening to drop speckle. Holds the background model state,
// so one instance serves exactly one stream.
class SilhouettePipeline {
public:
  SilhouettePipeline(int width, int height, const PipelineConfig& cfg,
                     StageTimings* timings = nullptr);

  ForegroundMask process(const Frame& frame);

private:
  PipelineConfig cfg_;
  KnnBgModel model_;
  StageTimings* timings_;
};

// Run the whole stream through a fresh SilhouettePipeline.
std::vector<ForegroundMask> silhouette_pipeline(FrameStream& stream, const PipelineConfig& cfg,
                                                StageTimings* timings = nullptr);

}  // namespace mw
