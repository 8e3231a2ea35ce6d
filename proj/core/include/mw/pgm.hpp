#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "mw/frame.hpp"

namespace mw {

// Read a binary (P5) PGM file. Header comments are honoured; the maximum
// gray value must be 255. Anything else raises DataError.
Frame read_pgm(const std::filesystem::path& path);

// Write a frame as binary PGM. I/O failures raise RuntimeError.
void write_pgm(const Frame& frame, const std::filesystem::path& path);

// Shell-style match with '*' and '?' (no character classes).
bool glob_match(const std::string& pattern, const std::string& name);

// Compare file names so embedded numbers order numerically:
// "frame2.pgm" sorts before "frame10.pgm".
bool natural_less(const std::string& a, const std::string& b);

// Open a directory of PGM frames as a stream. Files matching `pattern` are
// ordered by natural_less and read lazily; every frame must share the first
// file's dimensions. An empty match set raises DataError. PGM files carry no
// timing, so the caller supplies the nominal rate.
std::unique_ptr<FrameStream> read_pgm_sequence(const std::filesystem::path& dir,
                                               const std::string& pattern = "*.pgm",
                                               Fps fps = {});

}  // namespace mw
