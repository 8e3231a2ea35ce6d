#include "mw/silhouette.hpp"

#include <chrono>

#include "mw/blur.hpp"
#include "mw/morphology.hpp"

namespace mw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SilhouettePipeline::SilhouettePipeline(int width, int height, const PipelineConfig& cfg,
                                       StageTimings* timings)
    : cfg_(cfg), model_(width, height, cfg.knn, cfg.rng_seed), timings_(timings) {
  cfg_.validate();
}

ForegroundMask SilhouettePipeline::process(const Frame& frame) {
  if (timings_) {
    auto t0 = Clock::now();
    Frame smooth = gaussian_blur(frame, cfg_.blur.kernel, cfg_.blur.sigma);
    timings_->blur_seconds += seconds_since(t0);

    auto t1 = Clock::now();
    ForegroundMask raw = model_.apply(smooth);
    timings_->background_seconds += seconds_since(t1);

    auto t2 = Clock::now();
    ForegroundMask clean = opening(raw, cfg_.morph_radius);
    timings_->morphology_seconds += seconds_since(t2);

    ++timings_->frames;
    return clean;
  }
  Frame smooth = gaussian_blur(frame, cfg_.blur.kernel, cfg_.blur.sigma);
  ForegroundMask raw = model_.apply(smooth);
  return opening(raw, cfg_.morph_radius);
}

std::vector<ForegroundMask> silhouette_pipeline(FrameStream& stream, const PipelineConfig& cfg,
                                                StageTimings* timings) {
  SilhouettePipeline pipeline(stream.width(), stream.height(), cfg, timings);
  std::vector<ForegroundMask> masks;
  while (auto frame = stream.next()) {
    masks.push_back(pipeline.process(*frame));
  }
  return masks;
}

}  // namespace mw
