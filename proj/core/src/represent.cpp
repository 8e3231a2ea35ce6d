#include "mw/represent.hpp"

#include "mw/error.hpp"
#include "mw/sampler.hpp"
#include "mw/silhouette.hpp"

namespace mw {

RepresentationImage represent(FrameStream& stream, const PipelineConfig& cfg, bool training_mode,
                              StageTimings* timings) {
  cfg.validate();
  std::vector<ForegroundMask> masks = silhouette_pipeline(stream, cfg, timings);
  std::vector<ForegroundMask> samples = adaptive_sample(masks, cfg, timings);
  if (training_mode) {
    samples = trim_samples(std::move(samples), cfg.trim_count).samples;
  }
  if (samples.empty()) {
    throw EmptyActivityError("no activity detected in " + stream.source());
  }
  return accumulate(samples, cfg.beta, cfg.output_width, cfg.output_height, timings);
}

}  // namespace mw
