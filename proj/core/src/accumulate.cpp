#include "mw/accumulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mw/error.hpp"

namespace mw {

RepresentationImage::RepresentationImage(int width, int height, int sample_count)
    : width_(width), height_(height), sample_count_(sample_count) {
  if (width <= 0 || height <= 0) {
    throw UsageError("representation dimensions must be positive");
  }
  values_.assign(static_cast<std::size_t>(width) * height, 0.0);
}

Frame RepresentationImage::to_frame() const {
  Frame frame(width_, height_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double v = std::lround(values_[i]);
    frame.data()[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return frame;
}

RepresentationImage representation_from_frame(const Frame& frame) {
  if (frame.empty()) {
    throw UsageError("representation_from_frame: empty frame");
  }
  RepresentationImage image(frame.width(), frame.height());
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    image.values()[i] = frame.data()[i];
  }
  return image;
}

RepresentationImage resize_bilinear(const RepresentationImage& image, int out_width,
                                    int out_height) {
  if (image.empty()) {
    throw UsageError("resize_bilinear: empty image");
  }
  if (out_width <= 0 || out_height <= 0) {
    throw UsageError("resize_bilinear: output size must be positive");
  }
  if (out_width == image.width() && out_height == image.height()) {
    return image;
  }
  RepresentationImage out(out_width, out_height, image.sample_count());
  const double sx = static_cast<double>(image.width()) / out_width;
  const double sy = static_cast<double>(image.height()) / out_height;
  for (int y = 0; y < out_height; ++y) {
    double src_y = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(image.height() - 1));
    int y0 = static_cast<int>(src_y);
    int y1 = std::min(y0 + 1, image.height() - 1);
    double fy = src_y - y0;
    for (int x = 0; x < out_width; ++x) {
      double src_x =
          std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(image.width() - 1));
      int x0 = static_cast<int>(src_x);
      int x1 = std::min(x0 + 1, image.width() - 1);
      double fx = src_x - x0;
      double top = image.at(x0, y0) + fx * (image.at(x1, y0) - image.at(x0, y0));
      double bot = image.at(x0, y1) + fx * (image.at(x1, y1) - image.at(x0, y1));
      out.at(x, y) = top + fy * (bot - top);
    }
  }
  return out;
}

namespace {

void check_accumulate_args(std::size_t count, double beta, int out_width, int out_height) {
  if (count == 0) {
    throw UsageError("accumulate: no samples");
  }
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw UsageError("accumulate: beta must lie strictly between 0 and 1");
  }
  if (out_width <= 0 || out_height <= 0) {
    throw UsageError("accumulate: output size must be positive");
  }
}

template <typename GetValue>
RepresentationImage accumulate_impl(std::size_t count, int width, int height, GetValue&& value,
                                    double beta, int out_width, int out_height) {
  RepresentationImage acc(width, height, static_cast<int>(count));
  for (std::size_t i = 0, n = acc.values().size(); i < n; ++i) {
    acc.values()[i] = value(0, i);
  }
  for (std::size_t k = 1; k < count; ++k) {
    for (std::size_t i = 0, n = acc.values().size(); i < n; ++i) {
      double next = beta * acc.values()[i] + value(k, i);
      acc.values()[i] = std::clamp(next, 0.0, 255.0);
    }
  }
  return resize_bilinear(acc, out_width, out_height);
}

}  // namespace

RepresentationImage accumulate(const std::vector<Frame>& samples, double beta, int out_width,
                               int out_height) {
  check_accumulate_args(samples.size(), beta, out_width, out_height);
  const Frame& first = samples.front();
  for (const Frame& f : samples) {
    if (f.width() != first.width() || f.height() != first.height()) {
      throw UsageError("accumulate: samples must share dimensions");
    }
  }
  return accumulate_impl(
      samples.size(), first.width(), first.height(),
      [&](std::size_t k, std::size_t i) { return static_cast<double>(samples[k].data()[i]); },
      beta, out_width, out_height);
}

RepresentationImage accumulate(const std::vector<ForegroundMask>& samples, double beta,
                               int out_width, int out_height, StageTimings* timings) {
  check_accumulate_args(samples.size(), beta, out_width, out_height);
  const ForegroundMask& first = samples.front();
  for (const ForegroundMask& m : samples) {
    if (m.width() != first.width() || m.height() != first.height()) {
      throw UsageError("accumulate: samples must share dimensions");
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  RepresentationImage out = accumulate_impl(
      samples.size(), first.width(), first.height(),
      [&](std::size_t k, std::size_t i) { return samples[k].data()[i] ? 255.0 : 0.0; }, beta,
      out_width, out_height);
  if (timings) {
    timings->accumulate_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

}  // namespace mw
