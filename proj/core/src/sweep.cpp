#include "mw/harness/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mw/cnn/metrics.hpp"
#include "mw/error.hpp"
#include "mw/represent.hpp"
#include "mw/rng.hpp"

namespace mw::harness {

namespace {

std::string format_beta(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", beta);
  return buf;
}

cnn::Example<float> to_example(const RepresentationImage& image, int label) {
  cnn::Tensor<float> input({1, image.height(), image.width()});
  const std::vector<double>& src = image.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    input.data[i] = static_cast<float>(src[i] / 127.5 - 1.0);
  }
  return {std::move(input), label};
}

struct CellData {
  std::vector<cnn::Example<float>> train;
  std::vector<cnn::Example<float>> validation;
  std::vector<cnn::Example<float>> test;
  int height = 0;
  int width = 0;
};

CellData build_cell_data(const dataset::SplitResult& splits,
                         const PipelineConfig& cfg, const SweepOptions& options,
                         std::uint64_t cell_seed) {
  CellData data;
  for (const dataset::VideoEntry& entry : splits.train) {
    auto stream = dataset::open_entry(entry);
    RepresentationImage image = represent(*stream, cfg, /*training_mode=*/true);
    data.height = image.height();
    data.width = image.width();
    if (options.n_aug > 0) {
      dataset::LabeledExample base{image, entry.label, entry.id, "original"};
      for (const dataset::LabeledExample& v :
           dataset::augment(base, options.n_aug, options.max_shift,
                            derive_seed(cell_seed, "augment"))) {
        data.train.push_back(to_example(v.image, v.label));
      }
    } else {
      data.train.push_back(to_example(image, entry.label));
    }
  }
  for (const dataset::VideoEntry& entry : splits.validation) {
    auto stream = dataset::open_entry(entry);
    RepresentationImage image = represent(*stream, cfg, /*training_mode=*/false);
    data.validation.push_back(to_example(image, entry.label));
  }
  for (const dataset::VideoEntry& entry : splits.test) {
    auto stream = dataset::open_entry(entry);
    RepresentationImage image = represent(*stream, cfg, /*training_mode=*/false);
    data.test.push_back(to_example(image, entry.label));
  }
  return data;
}

}  // namespace

cnn::ModelConfig model_for_input(int height, int width, int classes) {
  if (height == 227 && width == 227) {
    return cnn::alexnet_config(classes);
  }
  if (height < 8 || width < 8) {
    throw UsageError("representation " + std::to_string(width) + "x" +
                     std::to_string(height) +
                     " is too small for the compact model");
  }
  cnn::ModelConfig cfg;
  cfg.in_channels = 1;
  cfg.in_h = height;
  cfg.in_w = width;
  cfg.blocks = {
      {16, 5, 2, 2, 2, 2},
      {32, 3, 1, 1, 2, 2},
  };
  cfg.dense_widths = {64};
  cfg.classes = classes;
  return cfg;
}

void SweepGrid::validate() const {
  if (betas.empty() || distances.empty() || windows.empty()) {
    throw UsageError("sweep grid needs at least one beta, distance and window");
  }
  for (double b : betas) {
    if (!(b > 0.0 && b < 1.0)) {
      throw UsageError("sweep beta must be in (0, 1)");
    }
  }
  for (int d : distances) {
    if (d < 1) {
      throw UsageError("sweep frame distance must be >= 1");
    }
  }
  for (int w : windows) {
    if (w < 3 || w % 2 == 0) {
      throw UsageError("sweep flow window must be odd and >= 3");
    }
  }
  base_train.validate();
}

std::vector<SweepRow> run_sweep(const std::filesystem::path& dataset_root,
                                const SweepGrid& grid,
                                const SweepOptions& options) {
  grid.validate();
  options.split.validate();

  dataset::ScanResult scan = dataset::scan_dataset(dataset_root);
  dataset::SplitResult splits = dataset::split(scan.entries, options.split);
  int classes = static_cast<int>(scan.class_names.size());
  if (classes < 2) {
    throw DataError("sweep needs at least two classes, found " +
                    std::to_string(classes));
  }

  std::vector<SweepRow> rows;
  rows.reserve(grid.betas.size() * grid.distances.size() * grid.windows.size());

  for (double beta : grid.betas) {
    for (int d : grid.distances) {
      for (int w : grid.windows) {
        SweepRow row;
        row.beta = beta;
        row.d = d;
        row.w = w;
        std::string cell_label = "cell:" + format_beta(beta) + ":" +
                                 std::to_string(d) + ":" + std::to_string(w);
        if (options.progress) {
          *options.progress << cell_label << " ..." << std::flush;
        }
        try {
          PipelineConfig cfg = grid.base_pipeline;
          cfg.beta = beta;
          cfg.flow_frame_distance = d;
          cfg.flow_window = w;
          cfg.validate();

          std::uint64_t cell_seed = derive_seed(grid.base_train.seed, cell_label);
          CellData data = build_cell_data(splits, cfg, options, cell_seed);
          if (data.train.empty() || data.validation.empty() || data.test.empty()) {
            throw DataError("split left an empty train, validation or test set");
          }

          cnn::ModelConfig model_cfg =
              model_for_input(data.height, data.width, classes);
          cnn::Network<float> net(model_cfg, cell_seed);
          cnn::TrainConfig tc = grid.base_train;
          tc.seed = cell_seed;

          auto t0 = std::chrono::steady_clock::now();
          cnn::train(net, data.train, data.validation, tc);
          auto t1 = std::chrono::steady_clock::now();

          cnn::Metrics metrics = cnn::evaluate(net, data.test);
          row.accuracy = metrics.accuracy;
          row.precision_macro = metrics.precision_macro;
          row.recall_macro = metrics.recall_macro;
          row.f1_macro = metrics.f1_macro;
          row.train_seconds =
              options.measure_time
                  ? std::chrono::duration<double>(t1 - t0).count()
                  : 0.0;
        } catch (const std::exception& e) {
          double nan = std::numeric_limits<double>::quiet_NaN();
          row.failed = true;
          row.error = e.what();
          row.accuracy = nan;
          row.precision_macro = nan;
          row.recall_macro = nan;
          row.f1_macro = nan;
          row.train_seconds = 0.0;
        }
        if (options.progress) {
          if (row.failed) {
            *options.progress << " failed: " << row.error << "\n";
          } else {
            char buf[128];
            std::snprintf(buf, sizeof(buf), " accuracy=%.4f f1=%.4f (%.1fs)\n",
                          row.accuracy, row.f1_macro, row.train_seconds);
            *options.progress << buf;
          }
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace mw::harness
