#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace mw {

// splitmix64 step. Fixed algorithm, fixed output on every platform.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent stream seed from a base seed and a label
// (FNV-1a over the label, then one splitmix64 mix). Used to give each
// video / weight tensor / epoch its own reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = base ^ h;
  return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t s = base ^ (salt * 0x9e3779b97f4a7c15ULL + 0x85ebca6b);
  return splitmix64(s);
}

// Deterministic pseudo-random generator. Distribution code is spelled out
// here (rather than using <random> distributions) because the standard
// leaves distribution algorithms implementation-defined and we need
// bit-identical sequences across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform integer in [0, bound). Lemire multiply-shift with rejection.
  std::uint32_t next_below(std::uint32_t bound) {
    std::uint64_t x = next_u64() >> 32;
    std::uint64_t m = x * bound;
    auto lo = static_cast<std::uint32_t>(m);
    if (lo < bound) {
      std::uint32_t threshold = (0u - bound) % bound;
      while (lo < threshold) {
        x = next_u64() >> 32;
        m = x * bound;
        lo = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  // Uniform integer in [lo, hi], inclusive.
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(static_cast<std::uint32_t>(hi - lo + 1)));
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bool() { return (next_u64() & 1u) != 0; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mw
