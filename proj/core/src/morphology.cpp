#include "mw/morphology.hpp"

#include <string>

#include "mw/error.hpp"

namespace mw {

namespace {

void check(const ForegroundMask& mask, int radius) {
  if (mask.empty()) {
    throw UsageError("morphology: empty mask");
  }
  if (radius < 1) {
    throw UsageError("morphology: radius must be >= 1, got " + std::to_string(radius));
  }
}

// The square element factorises into a horizontal and a vertical run, and
// min/max both distribute over that split, so two 1-D passes give the exact
// 2-D result. `outside` is the value assumed beyond the borders.
ForegroundMask separable_pass(const ForegroundMask& in, int radius, bool take_max,
                              bool outside) {
  int w = in.width(), h = in.height();
  ForegroundMask mid(w, h, in.frame_index());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool acc = !take_max;
      for (int k = -radius; k <= radius; ++k) {
        int xx = x + k;
        bool v = (xx < 0 || xx >= w) ? outside : in.at(xx, y);
        acc = take_max ? (acc || v) : (acc && v);
      }
      mid.set(x, y, acc);
    }
  }
  ForegroundMask out(w, h, in.frame_index());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool acc = !take_max;
      for (int k = -radius; k <= radius; ++k) {
        int yy = y + k;
        bool v = (yy < 0 || yy >= h) ? outside : mid.at(x, yy);
        acc = take_max ? (acc || v) : (acc && v);
      }
      out.set(x, y, acc);
    }
  }
  return out;
}

}  // namespace

ForegroundMask erode(const ForegroundMask& mask, int radius) {
  check(mask, radius);
  return separable_pass(mask, radius, /*take_max=*/false, /*outside=*/false);
}

ForegroundMask dilate(const ForegroundMask& mask, int radius) {
  check(mask, radius);
  return separable_pass(mask, radius, /*take_max=*/true, /*outside=*/false);
}

ForegroundMask opening(const ForegroundMask& mask, int radius) {
  return dilate(erode(mask, radius), radius);
}

}  // namespace mw
