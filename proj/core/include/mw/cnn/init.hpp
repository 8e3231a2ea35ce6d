#pragma once

#include <cmath>

#include "mw/cnn/tensor.hpp"
#include "mw/rng.hpp"

namespace mw::cnn {

// Fill a tensor with zero-mean normal values, std = sqrt(2/(fan_in+fan_out)).
template <typename T>
void glorot_normal_fill(Tensor<T>& t, int fan_in, int fan_out, Rng& rng) {
  if (fan_in < 1 || fan_out < 1) {
    throw UsageError("glorot init: fans must be >= 1");
  }
  double stddev = std::sqrt(2.0 / (fan_in + fan_out));
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<T>(stddev * rng.next_normal());
  }
}

// Fresh [fan_out, fan_in] weight matrix drawn from the seeded generator.
template <typename T = float>
Tensor<T> glorot_normal_init(int fan_in, int fan_out, std::uint64_t seed) {
  Tensor<T> t(std::vector<int>{fan_out, fan_in});
  Rng rng(seed);
  glorot_normal_fill(t, fan_in, fan_out, rng);
  return t;
}

}  // namespace mw::cnn
