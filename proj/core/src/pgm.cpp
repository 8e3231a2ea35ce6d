#include "mw/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <vector>

#include "mw/error.hpp"

namespace mw {

namespace {

// Next header token, skipping whitespace and '#' comments (which run to
// end of line).
bool next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) {
        in.unget();
        return true;
      }
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return !tok.empty();
}

int parse_header_int(std::istream& in, const std::string& path, const char* what) {
  std::string tok;
  if (!next_token(in, tok)) {
    throw DataError(path + ": unexpected end of PGM header reading " + what);
  }
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size() || v <= 0 || v > 1 << 20) {
      throw DataError(path + ": bad " + std::string(what) + " '" + tok + "'");
    }
    return static_cast<int>(v);
  } catch (const DataError&) {
    throw;
  } catch (const std::exception&) {
    throw DataError(path + ": bad " + std::string(what) + " '" + tok + "'");
  }
}

}  // namespace

Frame read_pgm(const std::filesystem::path& path) {
  std::string name = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open image file: " + name);
  }
  std::string magic;
  if (!next_token(in, magic) || magic != "P5") {
    throw DataError(name + ": not a binary PGM (P5) file");
  }
  int width = parse_header_int(in, name, "width");
  int height = parse_header_int(in, name, "height");
  int maxval = parse_header_int(in, name, "maxval");
  if (maxval != 255) {
    throw DataError(name + ": unsupported depth (maxval " + std::to_string(maxval) +
                    ", expected 255)");
  }
  in.get();  // single whitespace byte separating header from payload
  Frame frame(width, height);
  in.read(reinterpret_cast<char*>(frame.data()),
          static_cast<std::streamsize>(frame.pixel_count()));
  if (in.gcount() != static_cast<std::streamsize>(frame.pixel_count())) {
    throw DataError(name + ": truncated pixel data");
  }
  return frame;
}

void write_pgm(const Frame& frame, const std::filesystem::path& path) {
  if (frame.empty()) {
    throw UsageError("write_pgm: empty frame");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw RuntimeError("cannot open for writing: " + path.string());
  }
  out << "P5\n" << frame.width() << " " << frame.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.data()),
            static_cast<std::streamsize>(frame.pixel_count()));
  out.flush();
  if (!out) {
    throw RuntimeError("failed writing image to " + path.string());
  }
}

bool glob_match(const std::string& pattern, const std::string& name) {
  std::size_t p = 0, n = 0;
  std::size_t star = std::string::npos, star_n = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      star_n = n;
    } else if (star != std::string::npos) {
      p = star + 1;
      n = ++star_n;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') {
    ++p;
  }
  return p == pattern.size();
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) &&
        std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i0 = i, j0 = j;
      while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
      while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
      // Compare the digit runs numerically: longer run of significant
      // digits wins, equal lengths compare lexically.
      std::string da = a.substr(i0, i - i0), db = b.substr(j0, j - j0);
      std::size_t za = da.find_first_not_of('0'), zb = db.find_first_not_of('0');
      std::string sa = za == std::string::npos ? "" : da.substr(za);
      std::string sb = zb == std::string::npos ? "" : db.substr(zb);
      if (sa.size() != sb.size()) return sa.size() < sb.size();
      if (sa != sb) return sa < sb;
      // Numerically equal (e.g. "007" vs "7"): fall back to the raw runs.
      if (da != db) return da < db;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() < b.size();
}

namespace {

class PgmSequenceStream final : public FrameStream {
public:
  PgmSequenceStream(std::filesystem::path dir, std::vector<std::filesystem::path> files, Fps fps)
      : dir_(std::move(dir)), files_(std::move(files)), fps_(fps) {
    Frame first = read_pgm(files_.front());
    width_ = first.width();
    height_ = first.height();
  }

  int width() const override { return width_; }
  int height() const override { return height_; }
  Fps fps() const override { return fps_; }
  std::string source() const override { return dir_.string(); }

  std::optional<Frame> next() override {
    if (pos_ >= files_.size()) {
      return std::nullopt;
    }
    Frame frame = read_pgm(files_[pos_]);
    if (frame.width() != width_ || frame.height() != height_) {
      throw DataError(files_[pos_].string() + ": frame dimensions " +
                      std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                      " differ from first frame " + std::to_string(width_) + "x" +
                      std::to_string(height_));
    }
    frame.set_index(static_cast<std::int64_t>(pos_));
    ++pos_;
    return frame;
  }

private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  std::size_t pos_ = 0;
  int width_ = 0;
  int height_ = 0;
  Fps fps_;
};

}  // namespace

std::unique_ptr<FrameStream> read_pgm_sequence(const std::filesystem::path& dir,
                                               const std::string& pattern, Fps fps) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw DataError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && glob_match(pattern, entry.path().filename().string())) {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw DataError("no files matching '" + pattern + "' in " + dir.string());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return natural_less(a.filename().string(), b.filename().string());
  });
  return std::make_unique<PgmSequenceStream>(dir, std::move(files), fps);
}

}  // namespace mw
