#include "fixtures.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include <sys/wait.h>

#include "mw/y4m.hpp"

namespace fixture {

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "mwtest.XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<mw::Frame> drain(std::unique_ptr<mw::FrameStream> stream) {
  return stream->drain();
}

void write_corpus(const std::filesystem::path& root, const std::vector<ClassVideos>& classes) {
  for (const ClassVideos& cls : classes) {
    std::filesystem::create_directories(root / cls.name);
    for (std::size_t k = 0; k < cls.videos.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%02zu.y4m", cls.name.c_str(), k);
      mw::write_y4m_mono(root / cls.name / name, cls.videos[k], {30, 1});
    }
  }
}

std::vector<mw::Frame> translating_square_video(int width, int height, int size,
                                                double speed, int frames, int start_y,
                                                int start_x) {
  return mw::synth_moving_square(width, height, size, speed, 0.0, frames, start_x, start_y)
      ->drain();
}

int run_command(const std::string& command, std::string* output) {
  std::string full = command + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) {
    return -1;
  }
  std::string captured;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    captured.append(buffer, n);
  }
  int status = pclose(pipe);
  if (output != nullptr) {
    *output = std::move(captured);
  }
  if (WIFEXITED(status)) {
    return WEXITSTATUS(status);
  }
  return -1;
}

}  // namespace fixture
