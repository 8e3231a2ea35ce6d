#pragma once

#include <cstdint>
#include <vector>

#include "mw/frame.hpp"
#include "mw/mask.hpp"
#include "mw/rng.hpp"

namespace mw {

// Parameters of the per-pixel sample-buffer background model.
struct KnnParams {
  int history = 20;              // stored samples per pixel
  int required_matches = 3;      // matches needed to call a pixel background
  double radius = 20.0;          // max intensity distance for a match
  double update_probability = 0.1;  // chance a pixel's buffer absorbs the new value
  double shadow_low = 0.5;       // shadow band: current/background-mean ratio
  double shadow_high = 0.95;

  void validate() const;
};

// Background subtractor keeping a small sample history per pixel. A pixel is
// background when at least `required_matches` stored samples lie within
// `radius` of the incoming value. Buffers update stochastically for every
// pixel, so the model also recovers from permanent scene changes (a pixel
// stuck in the foreground would otherwise never relearn). Darkened pixels
// whose intensity ratio against the buffer mean falls inside the shadow band
// are relabelled background.
//
// The first frame seeds every buffer slot, and all state evolution is driven
// by the seeded generator: the model state after any frame prefix is a pure
// function of (seed, prefix).
class KnnBgModel {
public:
  KnnBgModel(int width, int height, KnnParams params = {}, std::uint64_t seed = 0);

  // Classify a frame and absorb it into the model.
  ForegroundMask apply(const Frame& frame);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const KnnParams& params() const noexcept { return params_; }
  bool seeded() const noexcept { return seeded_; }

  // Stored sample `slot` for a pixel (test hook).
  std::uint8_t sample(int x, int y, int slot) const;

private:
  int width_;
  int height_;
  KnnParams params_;
  Rng rng_;
  bool seeded_ = false;
  std::vector<std::uint8_t> samples_;  // width*height*history, pixel-major
};

// Classify `frame` against `model`, updating the model in the process.
ForegroundMask bg_subtract(KnnBgModel& model, const Frame& frame);

}  // namespace mw
