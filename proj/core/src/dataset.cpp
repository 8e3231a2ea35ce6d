#include "mw/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mw/error.hpp"
#include "mw/pgm.hpp"
#include "mw/rng.hpp"
#include "mw/y4m.hpp"

namespace mw::dataset {

namespace fs = std::filesystem;

namespace {

bool has_pgm_frames(const fs::path& dir) {
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && glob_match("*.pgm", entry.path().filename().string())) {
      return true;
    }
  }
  return false;
}

}  // namespace

ScanResult scan_dataset(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw DataError("dataset root is not a directory: " + root.string());
  }

  std::vector<std::string> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) {
      class_dirs.push_back(entry.path().filename().string());
    }
  }
  std::sort(class_dirs.begin(), class_dirs.end());

  ScanResult result;
  for (const std::string& class_name : class_dirs) {
    fs::path class_path = root / class_name;
    std::vector<VideoEntry> found;
    for (const auto& entry : fs::directory_iterator(class_path)) {
      VideoEntry v;
      v.class_name = class_name;
      v.path = entry.path();
      if (entry.is_regular_file() &&
          glob_match("*.y4m", entry.path().filename().string())) {
        v.id = class_name + "/" + entry.path().stem().string();
      } else if (entry.is_directory() && has_pgm_frames(entry.path())) {
        v.id = class_name + "/" + entry.path().filename().string();
        v.is_frame_dir = true;
      } else {
        continue;  // stray files are none of our business
      }
      found.push_back(std::move(v));
    }
    if (found.empty()) {
      result.warnings.push_back("class directory '" + class_name + "' holds no videos; skipped");
      continue;
    }
    int label = static_cast<int>(result.class_names.size());
    result.class_names.push_back(class_name);
    std::sort(found.begin(), found.end(),
              [](const VideoEntry& a, const VideoEntry& b) { return natural_less(a.id, b.id); });
    for (VideoEntry& v : found) {
      v.label = label;
      result.entries.push_back(std::move(v));
    }
  }
  if (result.class_names.empty()) {
    throw DataError("no classes with videos under " + root.string());
  }
  return result;
}

std::unique_ptr<FrameStream> open_entry(const VideoEntry& entry) {
  if (entry.is_frame_dir) {
    return read_pgm_sequence(entry.path);
  }
  return open_y4m(entry.path);
}

void SplitSpec::validate() const {
  if (train < 0.0 || validation < 0.0 || test < 0.0) {
    throw UsageError("split ratios must be non-negative");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw UsageError("split ratios must sum to 1");
  }
}

const char* split_name(Split split) {
  switch (split) {
    case Split::train:
      return "train";
    case Split::validation:
      return "validation";
    case Split::test:
      return "test";
  }
  return "?";
}

SplitResult split(const std::vector<VideoEntry>& entries, const SplitSpec& spec) {
  spec.validate();
  SplitResult result;

  // Group per class, keeping deterministic id order as the shuffle input.
  std::vector<std::string> class_names;
  for (const VideoEntry& e : entries) {
    if (std::find(class_names.begin(), class_names.end(), e.class_name) == class_names.end()) {
      class_names.push_back(e.class_name);
    }
  }
  std::sort(class_names.begin(), class_names.end());

  for (const std::string& class_name : class_names) {
    std::vector<VideoEntry> group;
    for (const VideoEntry& e : entries) {
      if (e.class_name == class_name) {
        group.push_back(e);
      }
    }
    std::sort(group.begin(), group.end(),
              [](const VideoEntry& a, const VideoEntry& b) { return natural_less(a.id, b.id); });

    if (group.size() < 3) {
      result.warnings.push_back("class '" + class_name + "' has only " +
                                std::to_string(group.size()) +
                                " videos; all assigned to train");
      for (VideoEntry& e : group) {
        result.train.push_back(std::move(e));
      }
      continue;
    }

    Rng rng(derive_seed(spec.seed, "split:" + class_name));
    rng.shuffle(group);

    const double n = static_cast<double>(group.size());
    const double ratios[3] = {spec.train, spec.validation, spec.test};
    std::size_t counts[3];
    double remainders[3];
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
      double exact = ratios[i] * n;
      counts[i] = static_cast<std::size_t>(std::floor(exact));
      // fmod, not exact - floor(exact): the latter is a mul-sub chain the
      // compiler may contract into an FMA in some lanes and not others,
      // which breaks remainder ties differently across optimization levels.
      remainders[i] = std::fmod(exact, 1.0);
      assigned += counts[i];
    }
    // Largest remainder takes each leftover slot; ties favour the earlier
    // of (train, validation, test).
    while (assigned < group.size()) {
      int best = 0;
      for (int i = 1; i < 3; ++i) {
        if (remainders[i] > remainders[best]) {
          best = i;
        }
      }
      ++counts[best];
      remainders[best] = -1.0;
      ++assigned;
    }

    std::size_t cursor = 0;
    for (int i = 0; i < 3; ++i) {
      auto* dest = i == 0 ? &result.train : (i == 1 ? &result.validation : &result.test);
      for (std::size_t k = 0; k < counts[i]; ++k) {
        dest->push_back(group[cursor++]);
      }
    }
  }
  return result;
}

void write_manifest(const fs::path& path, const SplitResult& result) {
  struct Row {
    const VideoEntry* entry;
    Split split;
  };
  std::vector<Row> rows;
  for (const VideoEntry& e : result.train) {
    rows.push_back({&e, Split::train});
  }
  for (const VideoEntry& e : result.validation) {
    rows.push_back({&e, Split::validation});
  }
  for (const VideoEntry& e : result.test) {
    rows.push_back({&e, Split::test});
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return natural_less(a.entry->id, b.entry->id); });

  std::ofstream out(path);
  if (!out) {
    throw RuntimeError("cannot open for writing: " + path.string());
  }
  out << "video_id,class,split\n";
  for (const Row& r : rows) {
    out << r.entry->id << "," << r.entry->class_name << "," << split_name(r.split) << "\n";
  }
  if (!out) {
    throw RuntimeError("failed writing manifest to " + path.string());
  }
}

RepresentationImage mirror_horizontal(const RepresentationImage& image) {
  if (image.empty()) {
    throw UsageError("mirror_horizontal: empty image");
  }
  RepresentationImage out(image.width(), image.height(), image.sample_count());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.at(x, y) = image.at(image.width() - 1 - x, y);
    }
  }
  return out;
}

RepresentationImage translate(const RepresentationImage& image, int dx, int dy) {
  if (image.empty()) {
    throw UsageError("translate: empty image");
  }
  RepresentationImage out(image.width(), image.height(), image.sample_count());
  for (int y = 0; y < image.height(); ++y) {
    int sy = y - dy;
    if (sy < 0 || sy >= image.height()) {
      continue;
    }
    for (int x = 0; x < image.width(); ++x) {
      int sx = x - dx;
      if (sx >= 0 && sx < image.width()) {
        out.at(x, y) = image.at(sx, sy);
      }
    }
  }
  return out;
}

std::vector<LabeledExample> augment(const LabeledExample& example, int n_aug, double max_shift,
                                    std::uint64_t seed) {
  if (n_aug < 0) {
    throw UsageError("augment: variant count must be >= 0");
  }
  if (max_shift < 0.0 || max_shift > 0.2) {
    throw UsageError("augment: max shift must lie in [0, 0.2]");
  }
  if (example.image.empty()) {
    throw UsageError("augment: empty image");
  }

  std::vector<LabeledExample> out;
  out.reserve(static_cast<std::size_t>(n_aug) + 1);
  out.push_back(example);

  Rng rng(derive_seed(seed, "augment:" + example.source_id));
  const int max_dx = static_cast<int>(std::floor(max_shift * example.image.width()));
  const int max_dy = static_cast<int>(std::floor(max_shift * example.image.height()));
  for (int k = 1; k <= n_aug; ++k) {
    bool mirror = rng.next_double() < 0.5;
    int dx = max_dx == 0 ? 0 : rng.next_int(-max_dx, max_dx);
    int dy = max_dy == 0 ? 0 : rng.next_int(-max_dy, max_dy);

    LabeledExample variant;
    variant.label = example.label;
    variant.source_id = example.source_id;
    variant.augmentation = "aug" + std::to_string(k) + ":m" + (mirror ? "1" : "0") + ":dx" +
                           std::to_string(dx) + ":dy" + std::to_string(dy);
    const RepresentationImage& base = example.image;
    variant.image = mirror ? translate(mirror_horizontal(base), dx, dy) : translate(base, dx, dy);
    out.push_back(std::move(variant));
  }
  return out;
}

}  // namespace mw::dataset
