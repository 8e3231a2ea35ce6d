#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mw/accumulate.hpp"
#include "mw/frame.hpp"

namespace mw::dataset {

// One source video found under a dataset root.
struct VideoEntry {
  std::string id;          // "<class>/<stem>", unique within the dataset
  std::string class_name;
  std::filesystem::path path;
  bool is_frame_dir = false;  // directory of PGM frames instead of a .y4m file
  int label = 0;
};

struct ScanResult {
  std::vector<VideoEntry> entries;
  std::vector<std::string> class_names;  // sorted, labels index into this
  std::vector<std::string> warnings;
};

// Discover `root/<class>/<video>` videos. Classes are the sorted non-empty
// subdirectory names; a class directory without any video yields a warning
// and no label. Videos are .y4m files or subdirectories holding *.pgm
// frames; anything else is ignored. Zero usable classes is a DataError.
ScanResult scan_dataset(const std::filesystem::path& root);

// Open a scanned entry as a frame stream.
std::unique_ptr<FrameStream> open_entry(const VideoEntry& entry);

struct SplitSpec {
  double train = 0.7;
  double validation = 0.15;
  double test = 0.15;
  std::uint64_t seed = 0;

  void validate() const;  // fractions >= 0 and summing to 1 (within 1e-9)
};

enum class Split { train, validation, test };
const char* split_name(Split split);

struct SplitResult {
  std::vector<VideoEntry> train;
  std::vector<VideoEntry> validation;
  std::vector<VideoEntry> test;
  std::vector<std::string> warnings;
};

// Stratified split: per class, entries are ordered by id, shuffled by a
// seed-derived stream, and cut by largest-remainder rounding of the ratios
// (remainder ties resolve train, then validation, then test). Classes with
// fewer than 3 videos go entirely to train with a warning. Splitting always
// happens at the source-video level, never after augmentation.
SplitResult split(const std::vector<VideoEntry>& entries, const SplitSpec& spec);

// Write the video-level manifest (`video_id,class,split`, sorted by id).
void write_manifest(const std::filesystem::path& path, const SplitResult& result);

// A representation image with its class and provenance.
struct LabeledExample {
  RepresentationImage image;
  int label = 0;
  std::string source_id;
  std::string augmentation = "original";
};

// Flip around the vertical axis.
RepresentationImage mirror_horizontal(const RepresentationImage& image);

// Shift by whole pixels, vacated area filled with 0.
RepresentationImage translate(const RepresentationImage& image, int dx, int dy);

// The original plus n_aug randomized variants: each variant mirrors with
// probability 0.5, then translates by uniform integer offsets up to
// max_shift times the image dimensions. Deterministic per (seed, source id).
// max_shift must lie in [0, 0.2].
std::vector<LabeledExample> augment(const LabeledExample& example, int n_aug, double max_shift,
                                    std::uint64_t seed);

}  // namespace mw::dataset
