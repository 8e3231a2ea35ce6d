#include "mw/frame.hpp"

#include "mw/error.hpp"

namespace mw {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw UsageError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
}

}  // namespace

Frame::Frame(int width, int height, std::uint8_t fill, std::int64_t index)
    : width_(width), height_(height), index_(index) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> pixels, std::int64_t index)
    : width_(width), height_(height), index_(index), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw UsageError("pixel buffer size " + std::to_string(pixels_.size()) +
                     " does not match " + std::to_string(width) + "x" + std::to_string(height));
  }
}

std::vector<Frame> FrameStream::drain() {
  std::vector<Frame> frames;
  while (auto f = next()) {
    frames.push_back(std::move(*f));
  }
  return frames;
}

VectorFrameStream::VectorFrameStream(std::vector<Frame> frames, Fps fps, std::string source)
    : frames_(std::move(frames)), fps_(fps), source_(std::move(source)) {
  if (!frames_.empty()) {
    width_ = frames_.front().width();
    height_ = frames_.front().height();
    for (std::size_t i = 0; i < frames_.size(); ++i) {
      if (frames_[i].width() != width_ || frames_[i].height() != height_) {
        throw UsageError("frame " + std::to_string(i) + " has mismatched dimensions");
      }
      frames_[i].set_index(static_cast<std::int64_t>(i));
    }
  }
}

std::optional<Frame> VectorFrameStream::next() {
  if (pos_ >= frames_.size()) {
    return std::nullopt;
  }
  return frames_[pos_++];
}

}  // namespace mw
