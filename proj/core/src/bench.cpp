#include "mw/harness/bench.hpp"

#include <algorithm>
#include <chrono>

#include "mw/cnn/network.hpp"
#include "mw/error.hpp"
#include "mw/harness/sweep.hpp"
#include "mw/represent.hpp"
#include "mw/timings.hpp"

namespace mw::harness {

namespace {

struct Pass {
  double wall_seconds = 0.0;
  StageTimings timings;
  RepresentationImage image;
};

Pass timed_pass(const std::vector<Frame>& frames, Fps fps,
                const PipelineConfig& cfg) {
  VectorFrameStream stream(frames, fps, "bench");
  Pass pass;
  auto t0 = std::chrono::steady_clock::now();
  pass.image = represent(stream, cfg, /*training_mode=*/false, &pass.timings);
  auto t1 = std::chrono::steady_clock::now();
  pass.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return pass;
}

double median_forward_ms(const RepresentationImage& image, int repeat,
                         std::uint64_t seed) {
  cnn::ModelConfig model_cfg = model_for_input(image.height(), image.width(), 2);
  cnn::Network<float> net(model_cfg, seed);

  cnn::Tensor<float> input({1, image.height(), image.width()});
  const std::vector<double>& src = image.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    input.data[i] = static_cast<float>(src[i] / 127.5 - 1.0);
  }

  net.forward(input);  // warm-up
  std::vector<double> samples;
  samples.reserve(repeat);
  for (int r = 0; r < repeat; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    net.forward(input);
    auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples[(samples.size() - 1) / 2];
}

}  // namespace

BenchReport run_bench(FrameStream& stream, const PipelineConfig& cfg, int repeat) {
  if (repeat < 1) {
    throw UsageError("benchmark repeat count must be >= 1");
  }
  cfg.validate();

  std::vector<Frame> frames = stream.drain();
  if (frames.size() < 300) {
    throw UsageError("benchmark needs a stream of at least 300 frames, got " +
                     std::to_string(frames.size()));
  }
  Fps fps = stream.fps();

  timed_pass(frames, fps, cfg);  // warm-up, discarded

  std::vector<Pass> passes;
  passes.reserve(repeat);
  for (int r = 0; r < repeat; ++r) {
    passes.push_back(timed_pass(frames, fps, cfg));
  }
  std::sort(passes.begin(), passes.end(),
            [](const Pass& a, const Pass& b) { return a.wall_seconds < b.wall_seconds; });
  const Pass& median = passes[(passes.size() - 1) / 2];

  BenchReport report;
  report.frames_processed = static_cast<int>(frames.size());
  report.wall_seconds = median.wall_seconds;
  report.fps = report.frames_processed / report.wall_seconds;

  double per_frame = 1000.0 / report.frames_processed;
  const StageTimings& t = median.timings;
  report.stage_breakdown = {
      {"blur", t.blur_seconds * per_frame},
      {"background", t.background_seconds * per_frame},
      {"morphology", t.morphology_seconds * per_frame},
      {"flow", t.flow_seconds * per_frame},
      {"accumulate", t.accumulate_seconds * per_frame},
  };

  report.classifier_ms = median_forward_ms(median.image, repeat, cfg.rng_seed);
  return report;
}

}  // namespace mw::harness
