#include "mw/y4m.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mw/error.hpp"

namespace mw {

namespace {

constexpr const char* kSignature = "YUV4MPEG2";

// Reads bytes up to (and consuming) the next '\n'. Fails if the line grows
// absurdly long or the file ends first.
bool read_line(std::istream& in, std::string& line, std::size_t limit = 4096) {
  line.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '\n') {
      return true;
    }
    line.push_back(static_cast<char>(c));
    if (line.size() > limit) {
      return false;
    }
  }
  return false;
}

std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) {
    out.push_back(tok);
  }
  return out;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) {
    return false;
  }
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size() || v <= 0 || v > 1 << 20) {
      return false;
    }
    out = static_cast<int>(v);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

enum class Chroma { c420, mono };

class Y4mStream final : public FrameStream {
public:
  explicit Y4mStream(const std::filesystem::path& path)
      : path_(path.string()), in_(path, std::ios::binary) {
    if (!in_) {
      throw DataError("cannot open video file: " + path_);
    }
    parse_header();
  }

  int width() const override { return width_; }
  int height() const override { return height_; }
  Fps fps() const override { return fps_; }
  std::string source() const override { return path_; }

  std::optional<Frame> next() override {
    if (done_) {
      return std::nullopt;
    }
    std::string line;
    if (in_.peek() == EOF) {
      done_ = true;
      return std::nullopt;
    }
    if (!read_line(in_, line) || line.rfind("FRAME", 0) != 0) {
      throw DataError(path_ + ": expected FRAME marker before frame " +
                      std::to_string(next_index_));
    }
    Frame frame(width_, height_, std::uint8_t{0}, next_index_);
    in_.read(reinterpret_cast<char*>(frame.data()),
             static_cast<std::streamsize>(frame.pixel_count()));
    if (in_.gcount() != static_cast<std::streamsize>(frame.pixel_count())) {
      throw TruncationError(path_ + ": truncated luma plane in frame " +
                                std::to_string(next_index_),
                            next_index_);
    }
    if (chroma_ == Chroma::c420) {
      std::streamsize chroma_bytes =
          2 * static_cast<std::streamsize>(width_ / 2) * (height_ / 2);
      skip_.resize(static_cast<std::size_t>(chroma_bytes));
      in_.read(skip_.data(), chroma_bytes);
      if (in_.gcount() != chroma_bytes) {
        throw TruncationError(path_ + ": truncated chroma planes in frame " +
                                  std::to_string(next_index_),
                              next_index_);
      }
    }
    ++next_index_;
    return frame;
  }

private:
  void parse_header() {
    std::string header;
    if (!read_line(in_, header)) {
      throw DataError(path_ + ": missing stream header");
    }
    if (header.rfind(kSignature, 0) != 0 ||
        (header.size() > 9 && header[9] != ' ')) {
      throw DataError(path_ + ": not a YUV4MPEG2 file");
    }
    bool have_w = false, have_h = false, have_f = false;
    std::string colorspace = "420";
    for (const auto& field : split_fields(header.substr(9))) {
      char tag = field[0];
      std::string value = field.substr(1);
      switch (tag) {
        case 'W':
          have_w = parse_int(value, width_);
          break;
        case 'H':
          have_h = parse_int(value, height_);
          break;
        case 'F': {
          auto colon = value.find(':');
          if (colon != std::string::npos && parse_int(value.substr(0, colon), fps_.num) &&
              parse_int(value.substr(colon + 1), fps_.den)) {
            have_f = true;
          }
          break;
        }
        case 'C':
          colorspace = value;
          break;
        default:
          break;  // interlacing, aspect and extension fields are irrelevant here
      }
    }
    if (!have_w || !have_h || !have_f) {
      throw DataError(path_ + ": header is missing W, H or F");
    }
    if (colorspace.rfind("420", 0) == 0) {
      chroma_ = Chroma::c420;
      if (width_ % 2 != 0 || height_ % 2 != 0) {
        throw DataError(path_ + ": 4:2:0 requires even dimensions");
      }
    } else if (colorspace == "mono") {
      chroma_ = Chroma::mono;
    } else {
      throw DataError(path_ + ": unsupported colorspace C" + colorspace);
    }
  }

  std::string path_;
  std::ifstream in_;
  int width_ = 0;
  int height_ = 0;
  Fps fps_;
  Chroma chroma_ = Chroma::c420;
  std::int64_t next_index_ = 0;
  bool done_ = false;
  std::vector<char> skip_;
};

}  // namespace

std::unique_ptr<FrameStream> open_y4m(const std::filesystem::path& path) {
  return std::make_unique<Y4mStream>(path);
}

void write_y4m_mono(const std::filesystem::path& path, const std::vector<Frame>& frames,
                    Fps fps) {
  if (frames.empty()) {
    throw UsageError("write_y4m_mono: no frames to write");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw RuntimeError("cannot open for writing: " + path.string());
  }
  const Frame& first = frames.front();
  out << kSignature << " W" << first.width() << " H" << first.height() << " F" << fps.num << ":"
      << fps.den << " Ip A1:1 Cmono\n";
  for (const Frame& f : frames) {
    if (f.width() != first.width() || f.height() != first.height()) {
      throw UsageError("write_y4m_mono: mixed frame dimensions");
    }
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(f.data()),
              static_cast<std::streamsize>(f.pixel_count()));
  }
  out.flush();
  if (!out) {
    throw RuntimeError("failed writing video to " + path.string());
  }
}

}  // namespace mw
