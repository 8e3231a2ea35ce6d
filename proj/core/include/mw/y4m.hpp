#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "mw/frame.hpp"

namespace mw {

// Open a YUV4MPEG2 file as a luma frame stream. Chroma planes (4:2:0
// subsampling in any of its tagged variants) are skipped; C mono files are
// read as-is. Throws DataError for missing files, bad signatures, malformed
// headers or unsupported colorspaces, and TruncationError (with the frame
// index) when a frame payload ends early.
std::unique_ptr<FrameStream> open_y4m(const std::filesystem::path& path);

// Write frames as a C mono YUV4MPEG2 file. Handy for packaging synthetic
// clips into datasets that the same reader can load back.
void write_y4m_mono(const std::filesystem::path& path, const std::vector<Frame>& frames,
                    Fps fps = {});

}  // namespace mw
