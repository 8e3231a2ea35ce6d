// Microbenchmarks for the classifier: raw GEMM, one conv layer, a full
// forward pass, and a forward+backward training step.

#include <benchmark/benchmark.h>

#include "mw/cnn/gemm.hpp"
#include "mw/cnn/layers.hpp"
#include "mw/cnn/network.hpp"
#include "mw/cnn/train.hpp"
#include "mw/rng.hpp"

namespace {

std::vector<float> random_vec(std::size_t n, std::uint64_t seed) {
  mw::Rng rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) {
    x = static_cast<float>(rng.next_double() * 2.0 - 1.0);
  }
  return v;
}

// The second conv layer's im2col GEMM shape: [256 x 2400] * [2400 x 729].
void BM_Gemm(benchmark::State& state) {
  int m = 256, k = 2400, n = 729;
  std::vector<float> a = random_vec(static_cast<std::size_t>(m) * k, 1);
  std::vector<float> b = random_vec(static_cast<std::size_t>(k) * n, 2);
  std::vector<float> c(static_cast<std::size_t>(m) * n, 0.0f);
  for (auto _ : state) {
    std::fill(c.begin(), c.end(), 0.0f);
    mw::cnn::gemm(m, n, k, a.data(), b.data(), c.data());
    benchmark::DoNotOptimize(c.data());
  }
  double flops = 2.0 * m * n * k * state.iterations();
  state.counters["GFLOPS"] =
      benchmark::Counter(flops * 1e-9, benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Gemm)->Unit(benchmark::kMillisecond);

void BM_ConvForward(benchmark::State& state) {
  mw::cnn::Conv2d<float> conv(96, 256, 5, 1, 2);
  mw::Rng rng(3);
  for (auto& w : conv.weight.data) {
    w = static_cast<float>(rng.next_normal() * 0.01);
  }
  mw::cnn::Tensor<float> input({96, 27, 27});
  input.data = random_vec(input.size(), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conv.forward(input));
  }
}
BENCHMARK(BM_ConvForward)->Unit(benchmark::kMillisecond);

void BM_ModelForward(benchmark::State& state) {
  mw::cnn::Network<float> net(mw::cnn::alexnet_config(2), 5);
  mw::cnn::Tensor<float> input({1, 227, 227});
  input.data = random_vec(input.size(), 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(input));
  }
}
BENCHMARK(BM_ModelForward)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  mw::cnn::Network<float> net(mw::cnn::alexnet_config(2), 7);
  mw::cnn::Tensor<float> input({1, 227, 227});
  input.data = random_vec(input.size(), 8);
  for (auto _ : state) {
    net.zero_grads();
    mw::cnn::Tensor<float> logits = net.forward(input);
    mw::cnn::Tensor<float> probs = mw::cnn::softmax(logits);
    probs.data[0] -= 1.0f;  // fused softmax + cross-entropy gradient, label 0
    net.backward(probs);
    benchmark::DoNotOptimize(net.grads());
  }
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
