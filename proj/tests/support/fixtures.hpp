// Shared test scaffolding: scratch directories, synthetic video corpora on
// disk, and a tiny process runner for CLI integration checks.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mw/frame.hpp"
#include "mw/synth.hpp"

namespace fixture {

// Unique directory under the system temp root, removed on destruction.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

// Drain any stream into a frame vector.
std::vector<mw::Frame> drain(std::unique_ptr<mw::FrameStream> stream);

// One class worth of videos for an on-disk corpus.
struct ClassVideos {
  std::string name;
  std::vector<std::vector<mw::Frame>> videos;
};

// Writes `root/<class>/<class>_<k>.y4m` for every video.
void write_corpus(const std::filesystem::path& root, const std::vector<ClassVideos>& classes);

// A horizontally translating square with a per-video start offset; the
// cheapest "same pose, different speed" source for two-class corpora.
std::vector<mw::Frame> translating_square_video(int width, int height, int size,
                                                double speed, int frames, int start_y,
                                                int start_x = 1);

// Runs a shell command, captures combined stdout+stderr into `output`, and
// returns the process exit code (-1 if it did not exit normally).
int run_command(const std::string& command, std::string* output = nullptr);

}  // namespace fixture
