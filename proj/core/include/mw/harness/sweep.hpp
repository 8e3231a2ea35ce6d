#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mw/cnn/network.hpp"
#include "mw/cnn/train.hpp"
#include "mw/config.hpp"
#include "mw/dataset.hpp"

namespace mw::harness {

// Parameter grid explored by run_sweep. Every combination of beta x
// frame distance x flow window is trained and scored; the remaining
// pipeline and training settings come from the base configs.
struct SweepGrid {
  std::vector<double> betas;
  std::vector<int> distances;
  std::vector<int> windows;
  PipelineConfig base_pipeline;
  cnn::TrainConfig base_train;

  void validate() const;
};

// One grid cell's outcome. When `failed` is set the metric fields are
// NaN and `error` carries the reason; the sweep itself keeps going.
struct SweepRow {
  double beta = 0.0;
  int d = 0;
  int w = 0;
  double accuracy = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
  double train_seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct SweepOptions {
  dataset::SplitSpec split;
  int n_aug = 0;  // extra augmented variants per training example
  double max_shift = 0.1;
  bool measure_time = true;  // when false, train_seconds is reported as 0
  std::ostream* progress = nullptr;
};

// Picks a network sized for the representation: full-size 227x227
// inputs get the standard five-block topology, smaller inputs a
// two-block model that exercises the same training path cheaply.
cnn::ModelConfig model_for_input(int height, int width, int classes);

// Runs the full grid against a dataset directory. The dataset is
// scanned and split once; each cell regenerates representations with
// its own pipeline settings, trains a fresh model, and is scored on
// the test split. A cell that throws is recorded as a failed row.
std::vector<SweepRow> run_sweep(const std::filesystem::path& dataset_root,
                                const SweepGrid& grid,
                                const SweepOptions& options = {});

}  // namespace mw::harness
