#pragma once

#include <cstdint>
#include <vector>

#include "mw/config.hpp"
#include "mw/mask.hpp"

namespace mw {

// Dense displacement field between two masks. u/v are in pixels (positive
// right/down); pixels that could not be solved carry (0,0) and valid = 0.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<float> u;
  std::vector<float> v;
  std::vector<std::uint8_t> valid;
  long long valid_count = 0;

  float u_at(int x, int y) const { return u[static_cast<std::size_t>(y) * width + x]; }
  float v_at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
  bool valid_at(int x, int y) const {
    return valid[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

// Mean displacement over the valid pixels of a field. `s` is the magnitude
// of the mean vector; `degenerate` is set when no pixel was valid (callers
// fall back to a fixed sampling interval).
struct FlowSummary {
  double mean_u = 0.0;
  double mean_v = 0.0;
  double s = 0.0;
  long long valid_count = 0;
  bool degenerate = true;
};

// Per-pixel least-squares flow over a w×w window, masks treated as 0/255
// intensity images. Spatial gradients come from central differences on
// `prev`; the temporal residual is re-evaluated against a bilinearly warped
// `next`, and each pixel's displacement is refined iteratively from the
// single-step solution (one step resolves at most ~1px on a hard edge, so
// larger motions need the refinement to reach them). A pixel is valid iff
// the 2x2 structure tensor of its window is well conditioned (smaller
// eigenvalue >= eigen_threshold), the pixel is foreground in prev or next,
// and the window holds any temporal difference at all (otherwise there is
// no motion evidence and the vector stays (0,0), invalid).
FlowField dense_flow(const ForegroundMask& prev, const ForegroundMask& next, int window,
                     double eigen_threshold);

// Reduce a field to its mean displacement. cartesian_mean averages
// components; polar_mean averages magnitudes and angles separately before
// converting back. Either way s == hypot(mean_u, mean_v).
FlowSummary summarize_flow(const FlowField& field,
                           FlowStatsMode mode = FlowStatsMode::cartesian_mean);

}  // namespace mw
