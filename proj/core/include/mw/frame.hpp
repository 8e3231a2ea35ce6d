#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mw {

// Frame rate as an exact rational, as video containers store it.
struct Fps {
  int num = 30;
  int den = 1;

  double hz() const { return den != 0 ? static_cast<double>(num) / den : 0.0; }
};

// Single-channel 8-bit luma image, row-major, origin at the top-left.
// Dimensions are fixed at construction; the pixel buffer always holds
// exactly width*height bytes.
class Frame {
public:
  Frame() = default;
  Frame(int width, int height, std::uint8_t fill = 0, std::int64_t index = 0);
  Frame(int width, int height, std::vector<std::uint8_t> pixels, std::int64_t index = 0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }

  // Position of this frame within its source stream (0-based).
  std::int64_t index() const noexcept { return index_; }
  void set_index(std::int64_t index) noexcept { index_ = index; }

  std::uint8_t at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::uint8_t* data() const noexcept { return pixels_.data(); }
  std::uint8_t* data() noexcept { return pixels_.data(); }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }
  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

private:
  int width_ = 0;
  int height_ = 0;
  std::int64_t index_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Pull-based source of luma frames. Implementations exist for Y4M files,
// PGM frame directories, in-memory sequences and synthetic scenes.
class FrameStream {
public:
  virtual ~FrameStream() = default;

  virtual int width() const = 0;
  virtual int height() const = 0;
  virtual Fps fps() const = 0;

  // Human-readable description of where the frames come from.
  virtual std::string source() const = 0;

  // Next frame, or nullopt once the stream is exhausted. Frames arrive with
  // consecutive indices starting at 0 and always match width()/height().
  virtual std::optional<Frame> next() = 0;

  // Read every remaining frame into memory.
  std::vector<Frame> drain();
};

// In-memory stream over a pre-built frame vector. Useful for synthetic
// fixtures and for replaying a drained stream several times.
class VectorFrameStream final : public FrameStream {
public:
  VectorFrameStream(std::vector<Frame> frames, Fps fps = {}, std::string source = "memory");

  int width() const override { return width_; }
  int height() const override { return height_; }
  Fps fps() const override { return fps_; }
  std::string source() const override { return source_; }
  std::optional<Frame> next() override;

private:
  std::vector<Frame> frames_;
  std::size_t pos_ = 0;
  int width_ = 0;
  int height_ = 0;
  Fps fps_;
  std::string source_;
};

}  // namespace mw
