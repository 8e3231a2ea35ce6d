#pragma once

#include <vector>

#include "mw/frame.hpp"
#include "mw/mask.hpp"
#include "mw/timings.hpp"

namespace mw {

// Real-valued motion representation image. Values always stay within
// [0, 255]; export quantises to 8 bits.
class RepresentationImage {
public:
  RepresentationImage() = default;
  RepresentationImage(int width, int height, int sample_count = 0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return values_.empty(); }

  // Number of samples that were folded into this image.
  int sample_count() const noexcept { return sample_count_; }
  void set_sample_count(int n) noexcept { sample_count_ = n; }

  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  Frame to_frame() const;

private:
  int width_ = 0;
  int height_ = 0;
  int sample_count_ = 0;
  std::vector<double> values_;
};

// Rebuild a representation from an 8-bit export (values become exact
// integers in [0,255]).
RepresentationImage representation_from_frame(const Frame& frame);

// Bilinear resample to a new size (pixel-centre alignment).
RepresentationImage resize_bilinear(const RepresentationImage& image, int out_width,
                                    int out_height);

// Exponentially weighted accumulation: R0 = F0, Rk = clamp(beta*Rk-1 + Fk),
// evaluated in real arithmetic, then resized to the requested output size.
// The k-th-from-last sample therefore contributes with weight beta^k (until
// the clamp bites). Masks enter as 0/255 intensities.
RepresentationImage accumulate(const std::vector<Frame>& samples, double beta, int out_width,
                               int out_height);
RepresentationImage accumulate(const std::vector<ForegroundMask>& samples, double beta,
                               int out_width, int out_height, StageTimings* timings = nullptr);

}  // namespace mw
