#pragma once

#include <cstdint>
#include <vector>

#include "mw/frame.hpp"

namespace mw {

// Binary foreground map aligned with a source frame. Stored as one byte per
// pixel (0 = background, 1 = foreground), row-major.
class ForegroundMask {
public:
  ForegroundMask() = default;
  ForegroundMask(int width, int height, std::int64_t frame_index = 0)
      : width_(width),
        height_(height),
        frame_index_(frame_index),
        bits_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return bits_.empty(); }

  // Index of the frame this mask was computed from.
  std::int64_t frame_index() const noexcept { return frame_index_; }
  void set_frame_index(std::int64_t index) noexcept { frame_index_ = index; }

  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool fg) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = fg ? 1 : 0;
  }

  const std::uint8_t* data() const noexcept { return bits_.data(); }
  std::uint8_t* data() noexcept { return bits_.data(); }
  std::size_t pixel_count() const noexcept { return bits_.size(); }

  std::size_t foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits_) {
      n += b;
    }
    return n;
  }
  bool any_foreground() const {
    for (std::uint8_t b : bits_) {
      if (b) {
        return true;
      }
    }
    return false;
  }

  bool operator==(const ForegroundMask& other) const {
    return width_ == other.width_ && height_ == other.height_ && bits_ == other.bits_;
  }

private:
  int width_ = 0;
  int height_ = 0;
  std::int64_t frame_index_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Render a mask as a 0/255 frame (for writing silhouettes out as images).
inline Frame mask_to_frame(const ForegroundMask& mask) {
  Frame frame(mask.width(), mask.height(), std::uint8_t{0}, mask.frame_index());
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    frame.data()[i] = mask.data()[i] ? 255 : 0;
  }
  return frame;
}

// Threshold a frame into a mask: pixels >= threshold become foreground.
inline ForegroundMask mask_from_frame(const Frame& frame, std::uint8_t threshold = 128) {
  ForegroundMask mask(frame.width(), frame.height(), frame.index());
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    mask.data()[i] = frame.data()[i] >= threshold ? 1 : 0;
  }
  return mask;
}

}  // namespace mw
