// mw — motion-representation pipeline CLI.
//
// Subcommands: represent, prepare, train, eval, sweep, bench, report.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mw/cnn/checkpoint.hpp"
#include "mw/cnn/metrics.hpp"
#include "mw/cnn/train.hpp"
#include "mw/dataset.hpp"
#include "mw/error.hpp"
#include "mw/harness/bench.hpp"
#include "mw/harness/config_file.hpp"
#include "mw/harness/report.hpp"
#include "mw/harness/sweep.hpp"
#include "mw/pgm.hpp"
#include "mw/represent.hpp"
#include "mw/synth.hpp"
#include "mw/y4m.hpp"

namespace fs = std::filesystem;

namespace {

std::unique_ptr<mw::FrameStream> open_video(const fs::path& path) {
  if (fs::is_directory(path)) {
    return mw::read_pgm_sequence(path);
  }
  if (!fs::exists(path)) {
    throw mw::DataError("no such video: " + path.string());
  }
  return mw::open_y4m(path);
}

// MW_SEED, when set, wins over both config file and command line.
std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("MW_SEED");
  if (raw == nullptr || *raw == '\0') {
    return std::nullopt;
  }
  char* end = nullptr;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') {
    throw mw::UsageError(std::string("MW_SEED is not an integer: ") + raw);
  }
  return static_cast<std::uint64_t>(v);
}

mw::cnn::Example<float> normalized_example(const mw::Frame& frame, int label) {
  mw::cnn::Tensor<float> input({1, frame.height(), frame.width()});
  const std::uint8_t* src = frame.data();
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    input.data[i] = static_cast<float>(src[i] / 127.5 - 1.0);
  }
  return {std::move(input), label};
}

std::string sanitize_for_filename(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == '/' || c == '\\') {
      c = '-';
    }
  }
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

// ---------------------------------------------------------------------------
// Shared option plumbing

struct CommonOptions {
  std::string config_path;

  mw::harness::FileConfig load() const {
    if (config_path.empty()) {
      return {};
    }
    return mw::harness::parse_config_file(config_path);
  }
};

void apply_seed_override(mw::PipelineConfig& pipeline, mw::cnn::TrainConfig& train) {
  if (auto seed = env_seed()) {
    pipeline.rng_seed = *seed;
    train.seed = *seed;
  }
}

// ---------------------------------------------------------------------------
// represent

struct RepresentArgs {
  CommonOptions common;
  std::string video;
  std::string output;
  bool training = false;
};

int run_represent(const RepresentArgs& args) {
  mw::harness::FileConfig file = args.common.load();
  mw::PipelineConfig cfg = file.pipeline;
  apply_seed_override(cfg, file.train);

  auto stream = open_video(args.video);
  mw::RepresentationImage image = mw::represent(*stream, cfg, args.training);
  mw::write_pgm(image.to_frame(), args.output);
  std::printf("wrote %s (%dx%d, %d sampled frames)\n", args.output.c_str(),
              image.width(), image.height(), image.sample_count());
  return 0;
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareArgs {
  CommonOptions common;
  std::string root;
  std::string out = "prepared";
  double train_ratio = 0.7;
  double val_ratio = 0.15;
  double test_ratio = 0.15;
  int n_aug = 0;
  double max_shift = 0.1;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void write_image_row(std::ofstream& index, const fs::path& out_dir,
                     const mw::RepresentationImage& image,
                     const mw::dataset::VideoEntry& entry, const char* split,
                     const std::string& augmentation) {
  std::string stem = entry.id.substr(entry.id.find('/') + 1);
  std::string name = sanitize_for_filename(
      augmentation == "original" ? stem : stem + "__" + augmentation);
  fs::path rel = fs::path("images") / split / entry.class_name / (name + ".pgm");
  fs::create_directories(out_dir / rel.parent_path());
  mw::write_pgm(image.to_frame(), out_dir / rel);
  index << rel.generic_string() << ',' << entry.label << ',' << entry.class_name
        << ',' << split << ',' << entry.id << ',' << augmentation << '\n';
}

int run_prepare(const PrepareArgs& args) {
  mw::harness::FileConfig file = args.common.load();
  mw::PipelineConfig cfg = file.pipeline;
  if (args.seed_given) {
    cfg.rng_seed = args.seed;
  }
  apply_seed_override(cfg, file.train);

  mw::dataset::SplitSpec spec;
  spec.train = args.train_ratio;
  spec.validation = args.val_ratio;
  spec.test = args.test_ratio;
  spec.seed = cfg.rng_seed;

  mw::dataset::ScanResult scan = mw::dataset::scan_dataset(args.root);
  for (const std::string& warning : scan.warnings) {
    std::fprintf(stderr, "warning: %s\n", warning.c_str());
  }
  mw::dataset::SplitResult splits = mw::dataset::split(scan.entries, spec);
  for (const std::string& warning : splits.warnings) {
    std::fprintf(stderr, "warning: %s\n", warning.c_str());
  }

  fs::path out_dir = args.out;
  fs::create_directories(out_dir);
  mw::dataset::write_manifest(out_dir / "manifest.csv", splits);

  std::ofstream classes(out_dir / "classes.csv");
  classes << "label,class\n";
  for (std::size_t i = 0; i < scan.class_names.size(); ++i) {
    classes << i << ',' << scan.class_names[i] << '\n';
  }
  classes.close();

  std::ofstream index(out_dir / "examples.csv");
  index << "image,label,class,split,source_id,augmentation\n";

  int images_written = 0;
  for (const mw::dataset::VideoEntry& entry : splits.train) {
    auto stream = mw::dataset::open_entry(entry);
    mw::RepresentationImage image = mw::represent(*stream, cfg, /*training_mode=*/true);
    if (args.n_aug > 0) {
      mw::dataset::LabeledExample base{image, entry.label, entry.id, "original"};
      for (const mw::dataset::LabeledExample& v : mw::dataset::augment(
               base, args.n_aug, args.max_shift,
               mw::derive_seed(cfg.rng_seed, "augment"))) {
        write_image_row(index, out_dir, v.image, entry, "train", v.augmentation);
        ++images_written;
      }
    } else {
      write_image_row(index, out_dir, image, entry, "train", "original");
      ++images_written;
    }
  }
  for (const mw::dataset::VideoEntry& entry : splits.validation) {
    auto stream = mw::dataset::open_entry(entry);
    mw::RepresentationImage image = mw::represent(*stream, cfg, /*training_mode=*/false);
    write_image_row(index, out_dir, image, entry, "validation", "original");
    ++images_written;
  }
  for (const mw::dataset::VideoEntry& entry : splits.test) {
    auto stream = mw::dataset::open_entry(entry);
    mw::RepresentationImage image = mw::represent(*stream, cfg, /*training_mode=*/false);
    write_image_row(index, out_dir, image, entry, "test", "original");
    ++images_written;
  }
  index.close();

  std::printf(
      "prepared %zu videos (%zu classes) into %s: %zu train / %zu validation / "
      "%zu test source videos, %d images\n",
      scan.entries.size(), scan.class_names.size(), out_dir.string().c_str(),
      splits.train.size(), splits.validation.size(), splits.test.size(),
      images_written);
  return 0;
}

// ---------------------------------------------------------------------------
// prepared-corpus loading (train/eval)

struct PreparedExample {
  mw::cnn::Example<float> example;
  std::string split;
  std::string source_id;
};

struct PreparedCorpus {
  std::vector<PreparedExample> examples;
  std::vector<std::string> class_names;
};

PreparedCorpus load_prepared(const fs::path& dir) {
  PreparedCorpus corpus;

  std::ifstream classes(dir / "classes.csv");
  if (!classes) {
    throw mw::DataError("not a prepared dataset (missing classes.csv): " +
                        dir.string());
  }
  std::string line;
  std::getline(classes, line);  // header
  while (std::getline(classes, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 2) {
      throw mw::DataError(dir.string() + "/classes.csv: malformed line '" + line + "'");
    }
    corpus.class_names.push_back(fields[1]);
  }

  std::ifstream index(dir / "examples.csv");
  if (!index) {
    throw mw::DataError("not a prepared dataset (missing examples.csv): " +
                        dir.string());
  }
  std::getline(index, line);  // header
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 6) {
      throw mw::DataError(dir.string() + "/examples.csv: malformed line '" + line + "'");
    }
    mw::Frame frame = mw::read_pgm(dir / fields[0]);
    int label = std::stoi(fields[1]);
    corpus.examples.push_back(
        {normalized_example(frame, label), fields[3], fields[4]});
  }
  if (corpus.examples.empty()) {
    throw mw::DataError("prepared dataset has no examples: " + dir.string());
  }
  return corpus;
}

std::vector<mw::cnn::Example<float>> take_split(const PreparedCorpus& corpus,
                                                const std::string& split) {
  std::vector<mw::cnn::Example<float>> out;
  for (const PreparedExample& ex : corpus.examples) {
    if (ex.split == split) {
      out.push_back(ex.example);  // copies the tensor
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  CommonOptions common;
  std::string data;
  std::string model_out = "model.ckpt";
  std::string log_out;
};

int run_train(const TrainArgs& args) {
  mw::harness::FileConfig file = args.common.load();
  mw::cnn::TrainConfig tc = file.train;
  apply_seed_override(file.pipeline, tc);
  tc.validate();

  PreparedCorpus corpus = load_prepared(args.data);
  std::vector<mw::cnn::Example<float>> train_set = take_split(corpus, "train");
  std::vector<mw::cnn::Example<float>> val_set = take_split(corpus, "validation");
  if (train_set.empty() || val_set.empty()) {
    throw mw::DataError("prepared dataset needs nonempty train and validation splits");
  }

  int h = train_set.front().input.dim(1);
  int w = train_set.front().input.dim(2);
  int classes = static_cast<int>(corpus.class_names.size());
  mw::cnn::ModelConfig model_cfg = mw::harness::model_for_input(h, w, classes);
  mw::cnn::Network<float> net(model_cfg, tc.seed);

  std::printf("training on %zu examples (%d classes, %dx%d input), validating on %zu\n",
              train_set.size(), classes, w, h, val_set.size());
  mw::cnn::TrainResult result = mw::cnn::train(net, train_set, val_set, tc);

  mw::cnn::save_checkpoint(args.model_out, net);
  if (!args.log_out.empty()) {
    mw::cnn::write_training_log(args.log_out, result.log);
  }
  std::printf("best epoch %d (val_loss %.6f); wrote %s\n", result.best_epoch,
              result.best_val_loss, args.model_out.c_str());
  if (result.early_stopped) {
    std::printf("stopped early after %zu epochs\n", result.log.size());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string model;
  std::string data;
  std::string split = "test";
};

int run_eval(const EvalArgs& args) {
  mw::cnn::Network<float> net = mw::cnn::load_checkpoint(args.model);
  PreparedCorpus corpus = load_prepared(args.data);
  std::vector<mw::cnn::Example<float>> examples = take_split(corpus, args.split);
  if (examples.empty()) {
    throw mw::DataError("no examples in split '" + args.split + "'");
  }

  mw::cnn::Metrics m = mw::cnn::evaluate(net, examples);
  std::printf("examples: %lld\n", m.total);
  std::printf("accuracy: %.4f\n", m.accuracy);
  std::printf("precision_macro: %.4f\n", m.precision_macro);
  std::printf("recall_macro: %.4f\n", m.recall_macro);
  std::printf("f1_macro: %.4f\n", m.f1_macro);
  for (std::size_t c = 0; c < m.precision.size(); ++c) {
    const char* name = c < corpus.class_names.size()
                           ? corpus.class_names[c].c_str()
                           : "?";
    std::printf("class %zu (%s): precision %.4f recall %.4f f1 %.4f\n", c, name,
                m.precision[c], m.recall[c], m.f1[c]);
  }
  std::printf("confusion (rows = truth):\n");
  for (const auto& row : m.confusion) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::printf("%s%lld", j == 0 ? "  " : " ", row[j]);
    }
    std::printf("\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  CommonOptions common;
  std::string root;
  std::string csv_out = "sweep.csv";
  std::string svg_out;
  bool no_timing = false;
  int n_aug = 0;
  double max_shift = 0.1;
  double train_ratio = 0.7;
  double val_ratio = 0.15;
  double test_ratio = 0.15;
  std::vector<double> betas;
  std::vector<int> distances;
  std::vector<int> windows;
};

int run_sweep_cmd(const SweepArgs& args) {
  mw::harness::FileConfig file = args.common.load();
  apply_seed_override(file.pipeline, file.train);

  mw::harness::SweepGrid grid;
  grid.base_pipeline = file.pipeline;
  grid.base_train = file.train;
  grid.betas = !args.betas.empty() ? args.betas : file.sweep_betas;
  grid.distances = !args.distances.empty() ? args.distances : file.sweep_distances;
  grid.windows = !args.windows.empty() ? args.windows : file.sweep_windows;
  if (grid.betas.empty()) grid.betas = {file.pipeline.beta};
  if (grid.distances.empty()) grid.distances = {file.pipeline.flow_frame_distance};
  if (grid.windows.empty()) grid.windows = {file.pipeline.flow_window};

  mw::harness::SweepOptions options;
  options.split.train = args.train_ratio;
  options.split.validation = args.val_ratio;
  options.split.test = args.test_ratio;
  options.split.seed = file.train.seed;
  options.n_aug = args.n_aug;
  options.max_shift = args.max_shift;
  options.measure_time = !args.no_timing;
  options.progress = &std::cerr;

  std::vector<mw::harness::SweepRow> rows =
      mw::harness::run_sweep(args.root, grid, options);
  mw::harness::write_sweep_csv(args.csv_out, rows);
  std::printf("wrote %s (%zu rows)\n", args.csv_out.c_str(), rows.size());
  if (!args.svg_out.empty()) {
    mw::harness::emit_report(rows, mw::harness::ReportFormat::svg, args.svg_out);
    std::printf("wrote %s\n", args.svg_out.c_str());
  }
  int failed = 0;
  for (const auto& row : rows) {
    failed += row.failed ? 1 : 0;
  }
  if (failed > 0) {
    std::fprintf(stderr, "warning: %d of %zu cells failed\n", failed, rows.size());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  CommonOptions common;
  std::string video;
  std::string synthetic;
  int repeat = 3;
};

// Bouncing-square scene: keeps motion inside the frame for any length.
std::unique_ptr<mw::FrameStream> synthetic_stream(int width, int height, int frames) {
  int side = std::max(8, height / 4);
  double margin = side / 2.0 + 2.0;
  mw::Actor actor;
  int period = 60;
  bool left = true;
  for (int f = 0; f <= frames + period; f += period) {
    double cx = left ? margin : width - margin;
    double cy = height / 2.0 + (left ? -height / 8.0 : height / 8.0);
    actor.keys.push_back({f, cx, cy, double(side), double(side)});
    left = !left;
  }
  mw::SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.frame_count = frames;
  spec.actors = {actor};
  return mw::make_scene_stream(std::move(spec));
}

int run_bench_cmd(const BenchArgs& args) {
  mw::harness::FileConfig file = args.common.load();
  mw::PipelineConfig cfg = file.pipeline;
  apply_seed_override(cfg, file.train);

  std::unique_ptr<mw::FrameStream> stream;
  if (!args.video.empty()) {
    stream = open_video(args.video);
  } else {
    int w = 160, h = 120, f = 330;
    if (!args.synthetic.empty() &&
        std::sscanf(args.synthetic.c_str(), "%dx%dx%d", &w, &h, &f) != 3) {
      throw mw::UsageError("--synthetic expects WxHxF, e.g. 160x120x330");
    }
    stream = synthetic_stream(w, h, f);
  }

  mw::harness::BenchReport report = mw::harness::run_bench(*stream, cfg, args.repeat);
  std::printf("frames:     %d\n", report.frames_processed);
  std::printf("wall:       %.3f s (median of %d)\n", report.wall_seconds, args.repeat);
  std::printf("throughput: %.1f fps\n", report.fps);
  std::printf("per-frame stage means:\n");
  for (const mw::harness::StageMean& stage : report.stage_breakdown) {
    std::printf("  %-11s %8.3f ms\n", stage.stage.c_str(), stage.mean_ms);
  }
  std::printf("classifier forward: %.3f ms per representation\n", report.classifier_ms);
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string input;
  std::string output;
  std::string format;
};

int run_report(const ReportArgs& args) {
  std::vector<mw::harness::SweepRow> rows = mw::harness::read_sweep_csv(args.input);
  std::string format = args.format;
  if (format.empty()) {
    format = fs::path(args.output).extension() == ".svg" ? "svg" : "csv";
  }
  mw::harness::emit_report(rows, mw::harness::parse_report_format(format), args.output);
  std::printf("wrote %s\n", args.output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motion-representation pipeline: silhouettes, adaptive sampling, "
               "accumulation and CNN classification"};
  app.require_subcommand(1);

  RepresentArgs rep;
  CLI::App* c_rep = app.add_subcommand("represent", "Turn one video into a representation image");
  c_rep->add_option("video", rep.video, "Input .y4m file or directory of PGM frames")->required();
  c_rep->add_option("-o,--output", rep.output, "Output PGM path")->required();
  c_rep->add_option("-c,--config", rep.common.config_path, "Config file");
  c_rep->add_flag("--training", rep.training, "Apply training-mode boundary trimming");

  PrepareArgs prep;
  CLI::App* c_prep = app.add_subcommand("prepare", "Scan, split and render a dataset to images");
  c_prep->add_option("root", prep.root, "Dataset root: <root>/<class>/<video>")->required();
  c_prep->add_option("-o,--output", prep.out, "Output directory");
  c_prep->add_option("-c,--config", prep.common.config_path, "Config file");
  c_prep->add_option("--train-ratio", prep.train_ratio, "Train fraction");
  c_prep->add_option("--val-ratio", prep.val_ratio, "Validation fraction");
  c_prep->add_option("--test-ratio", prep.test_ratio, "Test fraction");
  c_prep->add_option("--n-aug", prep.n_aug, "Augmented variants per training video");
  c_prep->add_option("--max-shift", prep.max_shift, "Max augmentation shift fraction");
  c_prep->add_option("--seed", prep.seed, "Pipeline/split seed")
      ->each([&prep](const std::string&) { prep.seed_given = true; });

  TrainArgs tr;
  CLI::App* c_tr = app.add_subcommand("train", "Train a classifier on a prepared dataset");
  c_tr->add_option("-d,--data", tr.data, "Prepared dataset directory")->required();
  c_tr->add_option("-o,--output", tr.model_out, "Checkpoint path");
  c_tr->add_option("--log", tr.log_out, "Training-log CSV path");
  c_tr->add_option("-c,--config", tr.common.config_path, "Config file");

  EvalArgs ev;
  CLI::App* c_ev = app.add_subcommand("eval", "Score a checkpoint on a prepared split");
  c_ev->add_option("-m,--model", ev.model, "Checkpoint path")->required();
  c_ev->add_option("-d,--data", ev.data, "Prepared dataset directory")->required();
  c_ev->add_option("--split", ev.split, "Split to score (train/validation/test)")
      ->check(CLI::IsMember({"train", "validation", "test"}));

  SweepArgs sw;
  CLI::App* c_sw = app.add_subcommand("sweep", "Grid-search beta, frame distance and window");
  c_sw->add_option("root", sw.root, "Dataset root")->required();
  c_sw->add_option("-o,--output", sw.csv_out, "Result CSV path");
  c_sw->add_option("--svg", sw.svg_out, "Also render grouped bars to this SVG");
  c_sw->add_option("-c,--config", sw.common.config_path, "Config file");
  c_sw->add_flag("--no-timing", sw.no_timing, "Report train_seconds as 0 for byte-stable output");
  c_sw->add_option("--n-aug", sw.n_aug, "Augmented variants per training video");
  c_sw->add_option("--max-shift", sw.max_shift, "Max augmentation shift fraction");
  c_sw->add_option("--train-ratio", sw.train_ratio, "Train fraction");
  c_sw->add_option("--val-ratio", sw.val_ratio, "Validation fraction");
  c_sw->add_option("--test-ratio", sw.test_ratio, "Test fraction");
  c_sw->add_option("--betas", sw.betas, "Beta values")->delimiter(',');
  c_sw->add_option("--distances", sw.distances, "Frame distances")->delimiter(',');
  c_sw->add_option("--windows", sw.windows, "Flow windows")->delimiter(',');

  BenchArgs be;
  CLI::App* c_be = app.add_subcommand("bench", "Measure representation throughput");
  c_be->add_option("video", be.video, "Input video (omit to use a synthetic stream)");
  c_be->add_option("--synthetic", be.synthetic, "Synthetic stream size as WxHxF (default 160x120x330)");
  c_be->add_option("-r,--repeat", be.repeat, "Timed passes (median reported)");
  c_be->add_option("-c,--config", be.common.config_path, "Config file");

  ReportArgs rp;
  CLI::App* c_rp = app.add_subcommand("report", "Re-render a sweep CSV as CSV or SVG");
  c_rp->add_option("input", rp.input, "Sweep CSV path")->required();
  c_rp->add_option("-o,--output", rp.output, "Output path")->required();
  c_rp->add_option("-f,--format", rp.format, "csv or svg (default: from output extension)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // --help and --version exit 0, bad usage exits 1
  }

  try {
    if (c_rep->parsed()) return run_represent(rep);
    if (c_prep->parsed()) return run_prepare(prep);
    if (c_tr->parsed()) return run_train(tr);
    if (c_ev->parsed()) return run_eval(ev);
    if (c_sw->parsed()) return run_sweep_cmd(sw);
    if (c_be->parsed()) return run_bench_cmd(be);
    if (c_rp->parsed()) return run_report(rp);
  } catch (const mw::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.kind()) {
      case mw::ErrorKind::usage: return 1;
      case mw::ErrorKind::data: return 2;
      case mw::ErrorKind::runtime: return 3;
    }
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
