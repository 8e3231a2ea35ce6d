#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mw/frame.hpp"

namespace mw {

// Stream rendering a filled square translating at constant velocity over a
// flat background. Positions are rounded to the nearest pixel per frame.
// The full trajectory is validated up front: if the square would leave the
// frame bounds at any frame index, a UsageError names that index.
std::unique_ptr<FrameStream> synth_moving_square(int width, int height, int square_size,
                                                 double dx, double dy, int frame_count,
                                                 int start_x = 0, int start_y = 0, Fps fps = {},
                                                 std::uint8_t background = 0,
                                                 std::uint8_t foreground = 255);

// Keyframed rectangle actor for scripted scenes: centre position and size
// are linearly interpolated between keyframes (clamped outside the keyed
// range). Unlike synth_moving_square, actors may enter, leave or resize;
// rectangles are clipped to the frame.
struct Keyframe {
  int frame = 0;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct Actor {
  std::vector<Keyframe> keys;
  std::uint8_t value = 255;
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  int frame_count = 0;
  std::uint8_t background = 0;
  std::vector<Actor> actors;
  Fps fps = {};
};

std::unique_ptr<FrameStream> make_scene_stream(SceneSpec spec);

// Render a single scene frame (exposed for tests).
Frame render_scene_frame(const SceneSpec& spec, int frame_index);

}  // namespace mw
