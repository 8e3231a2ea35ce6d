#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mw/cnn/train.hpp"
#include "mw/config.hpp"

namespace mw::harness {

// Values loaded from a `key = value` config file with [pipeline], [train]
// and [sweep] sections. Sweep lists may stay empty (callers then fall back
// to their own defaults).
struct FileConfig {
  PipelineConfig pipeline;
  cnn::TrainConfig train;
  std::vector<double> sweep_betas;
  std::vector<int> sweep_distances;
  std::vector<int> sweep_windows;
};

// Parse config text. Blank lines and '#' comments are skipped; keys must
// appear under their section; unknown keys or malformed values raise
// UsageError naming the offending line.
FileConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

// Parse a config file (missing file raises DataError).
FileConfig parse_config_file(const std::filesystem::path& path);

}  // namespace mw::harness
