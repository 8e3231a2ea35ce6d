#include "mw/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mw/error.hpp"

namespace mw {

namespace {

constexpr int kMaxIterations = 64;
constexpr double kStepEpsilon = 0.01;  // stop once the update is this small

struct Grid {
  int w = 0, h = 0;
  std::vector<float> data;

  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * w + x]; }

  float clamped(int x, int y) const {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return at(x, y);
  }

  float bilinear(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(w - 1));
    y = std::clamp(y, 0.0, static_cast<double>(h - 1));
    int x0 = static_cast<int>(x);
    int y0 = static_cast<int>(y);
    int x1 = std::min(x0 + 1, w - 1);
    int y1 = std::min(y0 + 1, h - 1);
    double fx = x - x0;
    double fy = y - y0;
    double top = at(x0, y0) + fx * (at(x1, y0) - at(x0, y0));
    double bot = at(x0, y1) + fx * (at(x1, y1) - at(x0, y1));
    return static_cast<float>(top + fy * (bot - top));
  }
};

Grid to_intensity(const ForegroundMask& mask) {
  Grid g;
  g.w = mask.width();
  g.h = mask.height();
  g.data.resize(mask.pixel_count());
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    g.data[i] = mask.data()[i] ? 255.0f : 0.0f;
  }
  return g;
}

// Summed-area table; sum() gives the inclusive rectangle sum.
struct Integral {
  int w = 0, h = 0;
  std::vector<double> table;  // (w+1) x (h+1)

  void build(int width, int height, const std::vector<double>& values) {
    w = width;
    h = height;
    table.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
      double row = 0.0;
      for (int x = 0; x < w; ++x) {
        row += values[static_cast<std::size_t>(y) * w + x];
        table[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
            table[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] + row;
      }
    }
  }

  double sum(int x0, int y0, int x1, int y1) const {  // inclusive corners
    const std::size_t stride = static_cast<std::size_t>(w) + 1;
    return table[(y1 + 1) * stride + (x1 + 1)] - table[(y0)*stride + (x1 + 1)] -
           table[(y1 + 1) * stride + (x0)] + table[(y0)*stride + (x0)];
  }
};

}  // namespace

FlowField dense_flow(const ForegroundMask& prev, const ForegroundMask& next, int window,
                     double eigen_threshold) {
  if (prev.empty() || next.empty() || prev.width() != next.width() ||
      prev.height() != next.height()) {
    throw UsageError("dense_flow: masks must be non-empty and share dimensions");
  }
  if (window < 3 || window % 2 == 0) {
    throw UsageError("dense_flow: window must be odd and >= 3, got " + std::to_string(window));
  }
  if (eigen_threshold < 0.0) {
    throw UsageError("dense_flow: eigen threshold must be >= 0");
  }

  const int w = prev.width();
  const int h = prev.height();
  const int half = window / 2;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  Grid ip = to_intensity(prev);
  Grid in = to_intensity(next);

  // Gradients of the earlier mask (central differences, edges clamped).
  std::vector<float> fx(n), fy(n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      fx[i] = 0.5f * (ip.clamped(x + 1, y) - ip.clamped(x - 1, y));
      fy[i] = 0.5f * (ip.clamped(x, y + 1) - ip.clamped(x, y - 1));
    }
  }

  // Window sums of the tensor entries and of the initial temporal energy
  // come from summed-area tables so the full frame costs O(n).
  std::vector<double> fxx(n), fxy(n), fyy(n), tenergy(n);
  for (std::size_t i = 0; i < n; ++i) {
    fxx[i] = static_cast<double>(fx[i]) * fx[i];
    fxy[i] = static_cast<double>(fx[i]) * fy[i];
    fyy[i] = static_cast<double>(fy[i]) * fy[i];
    tenergy[i] = std::abs(static_cast<double>(in.data[i]) - ip.data[i]);
  }
  Integral sxx, sxy, syy, ste;
  sxx.build(w, h, fxx);
  sxy.build(w, h, fxy);
  syy.build(w, h, fyy);
  ste.build(w, h, tenergy);

  FlowField field;
  field.width = w;
  field.height = h;
  field.u.assign(n, 0.0f);
  field.v.assign(n, 0.0f);
  field.valid.assign(n, 0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!prev.data()[i] && !next.data()[i]) {
        continue;
      }
      int x0 = std::max(0, x - half), x1 = std::min(w - 1, x + half);
      int y0 = std::max(0, y - half), y1 = std::min(h - 1, y + half);

      double a = sxx.sum(x0, y0, x1, y1);
      double b = sxy.sum(x0, y0, x1, y1);
      double c = syy.sum(x0, y0, x1, y1);
      double lambda_min = 0.5 * (a + c - std::sqrt((a - c) * (a - c) + 4.0 * b * b));
      if (lambda_min < eigen_threshold) {
        continue;
      }
      if (ste.sum(x0, y0, x1, y1) <= 0.0) {
        continue;  // the window never changed: no motion evidence
      }

      double det = a * c - b * b;
      double inv_a = c / det, inv_b = -b / det, inv_c = a / det;

      double u = 0.0, v = 0.0;
      for (int iter = 0; iter < kMaxIterations; ++iter) {
        double bx = 0.0, by = 0.0;
        for (int qy = y0; qy <= y1; ++qy) {
          for (int qx = x0; qx <= x1; ++qx) {
            std::size_t q = static_cast<std::size_t>(qy) * w + qx;
            if (fx[q] == 0.0f && fy[q] == 0.0f) {
              continue;
            }
            double it = in.bilinear(qx + u, qy + v) - ip.at(qx, qy);
            bx += fx[q] * it;
            by += fy[q] * it;
          }
        }
        double du = -(inv_a * bx + inv_b * by);
        double dv = -(inv_b * bx + inv_c * by);
        u += du;
        v += dv;
        if (du * du + dv * dv < kStepEpsilon * kStepEpsilon) {
          break;
        }
      }

      field.u[i] = static_cast<float>(u);
      field.v[i] = static_cast<float>(v);
      field.valid[i] = 1;
      ++field.valid_count;
    }
  }
  return field;
}

FlowSummary summarize_flow(const FlowField& field, FlowStatsMode mode) {
  FlowSummary summary;
  summary.valid_count = field.valid_count;
  if (field.valid_count == 0) {
    return summary;  // degenerate: means stay zero
  }
  summary.degenerate = false;

  if (mode == FlowStatsMode::cartesian_mean) {
    double su = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < field.valid.size(); ++i) {
      if (field.valid[i]) {
        su += field.u[i];
        sv += field.v[i];
      }
    }
    summary.mean_u = su / field.valid_count;
    summary.mean_v = sv / field.valid_count;
  } else {
    // Average magnitude and angle separately, then convert back. The angle
    // average is the plain arithmetic mean of atan2 values, which is only
    // meaningful when directions do not straddle the ±pi cut; that is the
    // literal reading of averaging "distances" and "directions" as scalars.
    double sm = 0.0, sa = 0.0;
    for (std::size_t i = 0; i < field.valid.size(); ++i) {
      if (field.valid[i]) {
        sm += std::hypot(static_cast<double>(field.u[i]), static_cast<double>(field.v[i]));
        sa += std::atan2(static_cast<double>(field.v[i]), static_cast<double>(field.u[i]));
      }
    }
    double m = sm / field.valid_count;
    double angle = sa / field.valid_count;
    summary.mean_u = m * std::cos(angle);
    summary.mean_v = m * std::sin(angle);
  }
  summary.s = std::hypot(summary.mean_u, summary.mean_v);
  return summary;
}

}  // namespace mw
