// Microbenchmarks for the per-frame pipeline stages at camera-like sizes.

#include <benchmark/benchmark.h>

#include "mw/accumulate.hpp"
#include "mw/blur.hpp"
#include "mw/config.hpp"
#include "mw/flow.hpp"
#include "mw/knn_bg.hpp"
#include "mw/morphology.hpp"
#include "mw/represent.hpp"
#include "mw/rng.hpp"
#include "mw/synth.hpp"

namespace {

mw::Frame noise_frame(int width, int height, std::uint64_t seed) {
  mw::Rng rng(seed);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
  for (auto& p : pixels) {
    p = static_cast<std::uint8_t>(rng.next_int(0, 255));
  }
  return {width, height, std::move(pixels)};
}

mw::ForegroundMask square_mask(int width, int height, int x0, int size) {
  mw::ForegroundMask mask(width, height);
  for (int y = height / 4; y < height / 4 + size; ++y) {
    for (int x = x0; x < x0 + size; ++x) {
      mask.set(x, y, true);
    }
  }
  return mask;
}

void args_camera_sizes(benchmark::internal::Benchmark* b) {
  b->Args({160, 120})->Args({640, 480})->Unit(benchmark::kMicrosecond);
}

void BM_GaussianBlur(benchmark::State& state) {
  int w = static_cast<int>(state.range(0));
  int h = static_cast<int>(state.range(1));
  mw::Frame frame = noise_frame(w, h, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mw::gaussian_blur(frame, 5, 1.0));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GaussianBlur)->Apply(args_camera_sizes);

void BM_KnnBackground(benchmark::State& state) {
  int w = static_cast<int>(state.range(0));
  int h = static_cast<int>(state.range(1));
  mw::KnnBgModel model(w, h, {}, 7);
  mw::Frame frame = noise_frame(w, h, 2);
  model.apply(frame);  // seed the sample buffers
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.apply(frame));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KnnBackground)->Apply(args_camera_sizes);

void BM_Opening(benchmark::State& state) {
  int w = static_cast<int>(state.range(0));
  int h = static_cast<int>(state.range(1));
  mw::ForegroundMask mask = square_mask(w, h, w / 4, h / 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mw::opening(mask, 1));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Opening)->Apply(args_camera_sizes);

void BM_DenseFlow(benchmark::State& state) {
  int w = static_cast<int>(state.range(0));
  int h = static_cast<int>(state.range(1));
  mw::ForegroundMask prev = square_mask(w, h, w / 4, h / 3);
  mw::ForegroundMask next = square_mask(w, h, w / 4 + 2, h / 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mw::dense_flow(prev, next, 15, 4000.0));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DenseFlow)->Apply(args_camera_sizes);

void BM_Accumulate(benchmark::State& state) {
  int w = static_cast<int>(state.range(0));
  int h = static_cast<int>(state.range(1));
  std::vector<mw::ForegroundMask> masks;
  for (int i = 0; i < 16; ++i) {
    masks.push_back(square_mask(w, h, w / 4 + i, h / 3));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mw::accumulate(masks, 0.9, 227, 227));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Accumulate)->Apply(args_camera_sizes);

void BM_RepresentVideo(benchmark::State& state) {
  int w = static_cast<int>(state.range(0));
  int h = static_cast<int>(state.range(1));
  auto source = mw::synth_moving_square(w, h, h / 4, 2.0, 0.0, 60, 2, h / 3);
  std::vector<mw::Frame> frames = source->drain();
  mw::PipelineConfig cfg;
  for (auto _ : state) {
    mw::VectorFrameStream stream(frames);
    benchmark::DoNotOptimize(mw::represent(stream, cfg, false));
  }
  state.SetItemsProcessed(state.iterations() * frames.size());
}
BENCHMARK(BM_RepresentVideo)->Args({160, 120})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
