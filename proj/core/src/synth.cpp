#include "mw/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mw/error.hpp"

namespace mw {

namespace {

class MovingSquareStream final : public FrameStream {
public:
  MovingSquareStream(int width, int height, int size, double dx, double dy, int frame_count,
                     int start_x, int start_y, Fps fps, std::uint8_t background,
                     std::uint8_t foreground)
      : width_(width),
        height_(height),
        size_(size),
        dx_(dx),
        dy_(dy),
        frame_count_(frame_count),
        start_x_(start_x),
        start_y_(start_y),
        fps_(fps),
        background_(background),
        foreground_(foreground) {}

  int width() const override { return width_; }
  int height() const override { return height_; }
  Fps fps() const override { return fps_; }
  std::string source() const override {
    return "synthetic square " + std::to_string(width_) + "x" + std::to_string(height_);
  }

  std::optional<Frame> next() override {
    if (index_ >= frame_count_) {
      return std::nullopt;
    }
    int x = static_cast<int>(std::lround(start_x_ + index_ * dx_));
    int y = static_cast<int>(std::lround(start_y_ + index_ * dy_));
    Frame frame(width_, height_, background_, index_);
    for (int py = y; py < y + size_; ++py) {
      for (int px = x; px < x + size_; ++px) {
        frame.at(px, py) = foreground_;
      }
    }
    ++index_;
    return frame;
  }

private:
  int width_, height_, size_;
  double dx_, dy_;
  int frame_count_;
  int start_x_, start_y_;
  Fps fps_;
  std::uint8_t background_, foreground_;
  std::int64_t index_ = 0;
};

}  // namespace

std::unique_ptr<FrameStream> synth_moving_square(int width, int height, int square_size,
                                                 double dx, double dy, int frame_count,
                                                 int start_x, int start_y, Fps fps,
                                                 std::uint8_t background,
                                                 std::uint8_t foreground) {
  if (width <= 0 || height <= 0 || square_size <= 0 || frame_count <= 0) {
    throw UsageError("synth_moving_square: dimensions, size and frame count must be positive");
  }
  if (square_size > width || square_size > height) {
    throw UsageError("synth_moving_square: square does not fit in the frame");
  }
  for (int k = 0; k < frame_count; ++k) {
    int x = static_cast<int>(std::lround(start_x + k * dx));
    int y = static_cast<int>(std::lround(start_y + k * dy));
    if (x < 0 || y < 0 || x + square_size > width || y + square_size > height) {
      throw UsageError("synth_moving_square: square leaves the frame at frame " +
                       std::to_string(k));
    }
  }
  return std::make_unique<MovingSquareStream>(width, height, square_size, dx, dy, frame_count,
                                              start_x, start_y, fps, background, foreground);
}

namespace {

Keyframe interpolate(const std::vector<Keyframe>& keys, int frame) {
  if (frame <= keys.front().frame) {
    return keys.front();
  }
  if (frame >= keys.back().frame) {
    return keys.back();
  }
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (frame <= keys[i].frame) {
      const Keyframe& a = keys[i - 1];
      const Keyframe& b = keys[i];
      double t = b.frame == a.frame
                     ? 0.0
                     : static_cast<double>(frame - a.frame) / (b.frame - a.frame);
      Keyframe k;
      k.frame = frame;
      k.cx = a.cx + t * (b.cx - a.cx);
      k.cy = a.cy + t * (b.cy - a.cy);
      k.w = a.w + t * (b.w - a.w);
      k.h = a.h + t * (b.h - a.h);
      return k;
    }
  }
  return keys.back();
}

void validate_scene(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0 || spec.frame_count <= 0) {
    throw UsageError("scene dimensions and frame count must be positive");
  }
  for (const Actor& actor : spec.actors) {
    if (actor.keys.empty()) {
      throw UsageError("scene actor has no keyframes");
    }
    for (std::size_t i = 1; i < actor.keys.size(); ++i) {
      if (actor.keys[i].frame < actor.keys[i - 1].frame) {
        throw UsageError("scene actor keyframes must be in frame order");
      }
    }
  }
}

class SceneStream final : public FrameStream {
public:
  explicit SceneStream(SceneSpec spec) : spec_(std::move(spec)) {}

  int width() const override { return spec_.width; }
  int height() const override { return spec_.height; }
  Fps fps() const override { return spec_.fps; }
  std::string source() const override {
    return "scripted scene " + std::to_string(spec_.width) + "x" + std::to_string(spec_.height);
  }

  std::optional<Frame> next() override {
    if (index_ >= spec_.frame_count) {
      return std::nullopt;
    }
    Frame frame = render_scene_frame(spec_, static_cast<int>(index_));
    frame.set_index(index_);
    ++index_;
    return frame;
  }

private:
  SceneSpec spec_;
  std::int64_t index_ = 0;
};

}  // namespace

Frame render_scene_frame(const SceneSpec& spec, int frame_index) {
  Frame frame(spec.width, spec.height, spec.background, frame_index);
  for (const Actor& actor : spec.actors) {
    Keyframe k = interpolate(actor.keys, frame_index);
    int x0 = static_cast<int>(std::lround(k.cx - k.w / 2));
    int y0 = static_cast<int>(std::lround(k.cy - k.h / 2));
    int x1 = x0 + static_cast<int>(std::lround(k.w));
    int y1 = y0 + static_cast<int>(std::lround(k.h));
    x0 = std::max(0, x0);
    y0 = std::max(0, y0);
    x1 = std::min(spec.width, x1);
    y1 = std::min(spec.height, y1);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        frame.at(x, y) = actor.value;
      }
    }
  }
  return frame;
}

std::unique_ptr<FrameStream> make_scene_stream(SceneSpec spec) {
  validate_scene(spec);
  return std::make_unique<SceneStream>(std::move(spec));
}

}  // namespace mw
