#include "mw/knn_bg.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "mw/error.hpp"

namespace mw {

void KnnParams::validate() const {
  if (history < 1) {
    throw UsageError("background model: history must be >= 1");
  }
  if (required_matches < 1 || required_matches > history) {
    throw UsageError("background model: required matches must be in [1, history]");
  }
  if (!(radius > 0.0)) {
    throw UsageError("background model: match radius must be positive");
  }
  if (!(update_probability > 0.0) || update_probability > 1.0) {
    throw UsageError("background model: update probability must be in (0, 1]");
  }
  if (shadow_low < 0.0 || !(shadow_low < shadow_high) || shadow_high > 1.0) {
    throw UsageError("background model: shadow band must satisfy 0 <= low < high <= 1");
  }
}

KnnBgModel::KnnBgModel(int width, int height, KnnParams params, std::uint64_t seed)
    : width_(width), height_(height), params_(params), rng_(seed) {
  if (width <= 0 || height <= 0) {
    throw UsageError("background model: dimensions must be positive");
  }
  params_.validate();
  samples_.assign(static_cast<std::size_t>(width) * height * params_.history, 0);
}

std::uint8_t KnnBgModel::sample(int x, int y, int slot) const {
  return samples_[(static_cast<std::size_t>(y) * width_ + x) * params_.history + slot];
}

ForegroundMask KnnBgModel::apply(const Frame& frame) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw UsageError("background model: frame is " + std::to_string(frame.width()) + "x" +
                     std::to_string(frame.height()) + " but model is " + std::to_string(width_) +
                     "x" + std::to_string(height_));
  }
  const int n = params_.history;
  const int k = params_.required_matches;
  ForegroundMask mask(width_, height_, frame.index());

  if (!seeded_) {
    for (std::size_t p = 0; p < frame.pixel_count(); ++p) {
      std::uint8_t v = frame.data()[p];
      std::uint8_t* buf = samples_.data() + p * n;
      for (int i = 0; i < n; ++i) {
        buf[i] = v;
      }
    }
    seeded_ = true;
    return mask;  // every pixel matches its own seed: all background
  }

  for (std::size_t p = 0; p < frame.pixel_count(); ++p) {
    const int v = frame.data()[p];
    std::uint8_t* buf = samples_.data() + p * n;

    int matches = 0;
    for (int i = 0; i < n && matches < k; ++i) {
      if (std::abs(v - static_cast<int>(buf[i])) <= params_.radius) {
        ++matches;
      }
    }
    bool fg = matches < k;

    if (fg) {
      // Shadows darken the surface but keep its ratio to the learned
      // background roughly constant; relabel those pixels.
      double mean = 0.0;
      for (int i = 0; i < n; ++i) {
        mean += buf[i];
      }
      mean /= n;
      if (mean >= 1.0) {
        double ratio = v / mean;
        if (ratio >= params_.shadow_low && ratio <= params_.shadow_high) {
          fg = false;
        }
      }
    }
    mask.data()[p] = fg ? 1 : 0;

    // Unconditional stochastic absorption keeps the model adaptive even
    // when a pixel is misclassified for a long stretch.
    if (rng_.next_double() < params_.update_probability) {
      buf[rng_.next_below(static_cast<std::uint32_t>(n))] = static_cast<std::uint8_t>(v);
    }
  }
  return mask;
}

ForegroundMask bg_subtract(KnnBgModel& model, const Frame& frame) {
  return model.apply(frame);
}

}  // namespace mw
