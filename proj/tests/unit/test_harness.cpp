#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "mw/error.hpp"
#include "mw/harness/bench.hpp"
#include "mw/harness/config_file.hpp"
#include "mw/harness/report.hpp"
#include "mw/harness/sweep.hpp"
#include "mw/synth.hpp"

namespace hn = mw::harness;

namespace {

// Seven videos per class so the default 0.7/0.15/0.15 split leaves a
// non-empty test set (5/1/1 per class).
void write_sweep_corpus(const std::filesystem::path& root, int frames = 20) {
  std::vector<fixture::ClassVideos> classes(2);
  classes[0].name = "slow";
  classes[1].name = "fast";
  for (int i = 0; i < 7; ++i) {
    classes[0].videos.push_back(
        fixture::translating_square_video(96, 32, 10, 1.0, frames, 8, 1 + i));
    classes[1].videos.push_back(
        fixture::translating_square_video(96, 32, 10, 3.0, frames, 12, 1 + i));
  }
  fixture::write_corpus(root, classes);
}

hn::SweepGrid small_grid() {
  hn::SweepGrid grid;
  grid.betas = {0.8};
  grid.distances = {1};
  grid.windows = {15};
  grid.base_pipeline.output_width = 32;
  grid.base_pipeline.output_height = 32;
  grid.base_train.epochs = 2;
  grid.base_train.batch_size = 4;
  grid.base_train.learning_rate = 0.01;
  grid.base_train.seed = 3;
  return grid;
}

// Long-running bench input: a square bouncing between the frame edges, so
// streams of any length stay in bounds.
std::unique_ptr<mw::FrameStream> bouncing_stream(int frames) {
  mw::Actor actor;
  for (int f = 0, left = 1; f <= frames + 40; f += 40, left = !left) {
    actor.keys.push_back({f, left ? 12.0 : 50.0, 24.0, 12.0, 12.0});
  }
  mw::SceneSpec spec;
  spec.width = 64;
  spec.height = 48;
  spec.frame_count = frames;
  spec.actors = {actor};
  return mw::make_scene_stream(std::move(spec));
}

std::vector<hn::SweepRow> fixed_rows() {
  // Values chosen to be exact at the printed precision, so CSV round
  // trips reproduce them bit for bit.
  hn::SweepRow a;
  a.beta = 0.7;
  a.d = 1;
  a.w = 15;
  a.accuracy = 0.875;
  a.precision_macro = 0.75;
  a.recall_macro = 0.8125;
  a.f1_macro = 0.78125;
  a.train_seconds = 1.5;
  hn::SweepRow b;
  b.beta = 0.85;
  b.d = 2;
  b.w = 21;
  b.accuracy = 0.5;
  b.precision_macro = 0.5;
  b.recall_macro = 0.5;
  b.f1_macro = 0.5;
  b.train_seconds = 0.25;
  return {a, b};
}

}  // namespace

TEST_CASE("config files parse into pipeline, train and sweep settings") {
  const std::string text =
      "# representation settings\n"
      "[pipeline]\n"
      "beta = 0.75\n"
      "flow_frame_distance = 2\n"
      "flow_window = 21\n"
      "fallback_interval = 3\n"
      "interval_min = 2\n"
      "interval_max = 25\n"
      "trim_count = 4\n"
      "output_width = 64\n"
      "output_height = 48\n"
      "eigen_threshold = 5000\n"
      "rng_seed = 77\n"
      "blur_kernel = 7\n"
      "blur_sigma = 1.5\n"
      "knn_history = 10\n"
      "knn_matches = 2\n"
      "knn_radius = 15\n"
      "knn_update_probability = 0.2\n"
      "knn_shadow_low = 0.4\n"
      "knn_shadow_high = 0.9\n"
      "morph_radius = 2\n"
      "flow_stats = polar\n"
      "interval_mode = inverse\n"
      "inverse_scale = 6\n"
      "\n"
      "[train]\n"
      "learning_rate = 0.005\n"
      "momentum = 0.8\n"
      "batch_size = 16\n"
      "epochs = 12\n"
      "seed = 9\n"
      "early_stop_patience = 3\n"
      "\n"
      "[sweep]\n"
      "betas = 0.7, 0.8, 0.9\n"
      "distances = 1,2\n"
      "windows = 15\n";

  hn::FileConfig cfg = hn::parse_config_text(text);
  CHECK(cfg.pipeline.beta == doctest::Approx(0.75));
  CHECK(cfg.pipeline.flow_frame_distance == 2);
  CHECK(cfg.pipeline.flow_window == 21);
  CHECK(cfg.pipeline.fallback_interval == 3);
  CHECK(cfg.pipeline.interval_max == 25);
  CHECK(cfg.pipeline.trim_count == 4);
  CHECK(cfg.pipeline.output_width == 64);
  CHECK(cfg.pipeline.output_height == 48);
  CHECK(cfg.pipeline.eigen_threshold == doctest::Approx(5000.0));
  CHECK(cfg.pipeline.rng_seed == 77);
  CHECK(cfg.pipeline.blur.kernel == 7);
  CHECK(cfg.pipeline.blur.sigma == doctest::Approx(1.5));
  CHECK(cfg.pipeline.knn.history == 10);
  CHECK(cfg.pipeline.knn.required_matches == 2);
  CHECK(cfg.pipeline.knn.radius == doctest::Approx(15.0));
  CHECK(cfg.pipeline.knn.update_probability == doctest::Approx(0.2));
  CHECK(cfg.pipeline.knn.shadow_low == doctest::Approx(0.4));
  CHECK(cfg.pipeline.knn.shadow_high == doctest::Approx(0.9));
  CHECK(cfg.pipeline.morph_radius == 2);
  CHECK(cfg.pipeline.flow_stats == mw::FlowStatsMode::polar_mean);
  CHECK(cfg.pipeline.interval_mode == mw::IntervalMode::inverse);
  CHECK(cfg.pipeline.inverse_scale == doctest::Approx(6.0));
  CHECK(cfg.train.learning_rate == doctest::Approx(0.005));
  CHECK(cfg.train.momentum == doctest::Approx(0.8));
  CHECK(cfg.train.batch_size == 16);
  CHECK(cfg.train.epochs == 12);
  CHECK(cfg.train.seed == 9);
  CHECK(cfg.train.early_stop_patience == 3);
  CHECK(cfg.sweep_betas == std::vector<double>{0.7, 0.8, 0.9});
  CHECK(cfg.sweep_distances == std::vector<int>{1, 2});
  CHECK(cfg.sweep_windows == std::vector<int>{15});
}

TEST_CASE("config parse errors name the offending line") {
  auto message_of = [](const std::string& text) {
    try {
      hn::parse_config_text(text, "test.conf");
      return std::string("<no error>");
    } catch (const mw::UsageError& e) {
      return std::string(e.what());
    }
  };

  SUBCASE("unknown keys") {
    std::string msg = message_of("[pipeline]\nbogus_key = 1\n");
    CHECK(msg.find("test.conf:2") != std::string::npos);
    CHECK(msg.find("bogus_key") != std::string::npos);
  }

  SUBCASE("key before any section") {
    std::string msg = message_of("beta = 0.5\n");
    CHECK(msg.find("test.conf:1") != std::string::npos);
  }

  SUBCASE("malformed numbers") {
    std::string msg = message_of("[pipeline]\nbeta = fast\n");
    CHECK(msg.find("test.conf:2") != std::string::npos);
    msg = message_of("[train]\nepochs = 3.5\n");
    CHECK(msg.find("test.conf:2") != std::string::npos);
  }

  SUBCASE("unknown section") {
    CHECK(message_of("[model]\n").find("test.conf:1") != std::string::npos);
  }

  SUBCASE("bad enum values") {
    CHECK(message_of("[pipeline]\nflow_stats = radial\n").find("radial") != std::string::npos);
    CHECK(message_of("[pipeline]\ninterval_mode = up\n").find("up") != std::string::npos);
  }

  SUBCASE("missing equals sign") {
    CHECK(message_of("[pipeline]\nbeta 0.5\n").find("test.conf:2") != std::string::npos);
  }

  SUBCASE("comments and blanks are fine") {
    CHECK_NOTHROW(hn::parse_config_text("\n# hello\n  \n[pipeline]\n# beta = bad\n"));
  }
}

TEST_CASE("config files load from disk, missing files are data errors") {
  fixture::TempDir dir;
  std::filesystem::path path = dir / "run.conf";
  std::ofstream(path) << "[pipeline]\nbeta = 0.6\n";
  hn::FileConfig cfg = hn::parse_config_file(path);
  CHECK(cfg.pipeline.beta == doctest::Approx(0.6));
  CHECK_THROWS_AS(hn::parse_config_file(dir / "absent.conf"), mw::DataError);
}

TEST_CASE("model selection by representation size") {
  mw::cnn::ModelConfig full = hn::model_for_input(227, 227, 6);
  CHECK(full.blocks.size() == 5);
  CHECK(full.blocks[0].filters == 96);
  CHECK(full.dense_widths == std::vector<int>{4096, 4096});
  CHECK(full.classes == 6);

  mw::cnn::ModelConfig compact = hn::model_for_input(64, 64, 3);
  CHECK(compact.blocks.size() == 2);
  CHECK(compact.in_h == 64);
  CHECK(compact.classes == 3);
  CHECK_NOTHROW(compact.validate());

  mw::cnn::ModelConfig min_size = hn::model_for_input(8, 8, 2);
  CHECK_NOTHROW(min_size.validate());

  CHECK_THROWS_AS(hn::model_for_input(4, 64, 2), mw::UsageError);
}

TEST_CASE("sweep grid validation") {
  hn::SweepGrid grid = small_grid();
  CHECK_NOTHROW(grid.validate());
  grid.betas = {};
  CHECK_THROWS_AS(grid.validate(), mw::UsageError);
  grid = small_grid();
  grid.betas = {1.0};
  CHECK_THROWS_AS(grid.validate(), mw::UsageError);
  grid = small_grid();
  grid.distances = {0};
  CHECK_THROWS_AS(grid.validate(), mw::UsageError);
  grid = small_grid();
  grid.windows = {4};
  CHECK_THROWS_AS(grid.validate(), mw::UsageError);
  grid = small_grid();
  grid.base_train.epochs = 0;
  CHECK_THROWS_AS(grid.validate(), mw::UsageError);
}

TEST_CASE("a single-cell sweep trains and scores one row") {
  fixture::TempDir dir;
  write_sweep_corpus(dir.path());

  hn::SweepOptions options;
  options.measure_time = true;
  std::vector<hn::SweepRow> rows = hn::run_sweep(dir.path(), small_grid(), options);
  REQUIRE(rows.size() == 1);
  const hn::SweepRow& row = rows[0];
  CHECK(!row.failed);
  CHECK(row.beta == doctest::Approx(0.8));
  CHECK(row.d == 1);
  CHECK(row.w == 15);
  CHECK(row.accuracy >= 0.0);
  CHECK(row.accuracy <= 1.0);
  CHECK(std::isfinite(row.precision_macro));
  CHECK(std::isfinite(row.recall_macro));
  CHECK(std::isfinite(row.f1_macro));
  CHECK(row.train_seconds >= 0.0);
  CHECK(row.error.empty());
}

TEST_CASE("sweeps enumerate the grid in order and stay deterministic") {
  fixture::TempDir dir;
  write_sweep_corpus(dir.path());

  hn::SweepGrid grid = small_grid();
  grid.betas = {0.5, 0.7, 0.9};
  hn::SweepOptions options;
  options.measure_time = false;

  std::ostringstream progress;
  options.progress = &progress;
  std::vector<hn::SweepRow> rows = hn::run_sweep(dir.path(), grid, options);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].beta == doctest::Approx(0.5));
  CHECK(rows[1].beta == doctest::Approx(0.7));
  CHECK(rows[2].beta == doctest::Approx(0.9));
  for (const auto& row : rows) {
    CHECK(row.d == 1);
    CHECK(row.w == 15);
    CHECK(row.train_seconds == 0.0);  // timing suppressed
  }
  CHECK(progress.str().find("cell") != std::string::npos);

  std::vector<hn::SweepRow> again = hn::run_sweep(dir.path(), grid, options);
  CHECK(hn::sweep_csv_text(rows) == hn::sweep_csv_text(again));  // byte-identical
}

TEST_CASE("a sweep over unusable videos reports failed rows instead of throwing") {
  fixture::TempDir dir;
  // Static squares: no motion, so representation building raises the
  // empty-activity error inside every cell.
  std::vector<fixture::ClassVideos> classes(2);
  classes[0].name = "a";
  classes[1].name = "b";
  for (int i = 0; i < 3; ++i) {
    classes[0].videos.push_back(fixture::translating_square_video(48, 32, 10, 0.0, 12, 8));
    classes[1].videos.push_back(fixture::translating_square_video(48, 32, 10, 0.0, 12, 12));
  }
  fixture::write_corpus(dir.path(), classes);

  hn::SweepGrid grid = small_grid();
  grid.betas = {0.6, 0.9};
  hn::SweepOptions options;
  options.measure_time = false;
  std::vector<hn::SweepRow> rows = hn::run_sweep(dir.path(), grid, options);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.failed);
    CHECK(!row.error.empty());
    CHECK(std::isnan(row.accuracy));
    CHECK(std::isnan(row.f1_macro));
  }
}

TEST_CASE("sweeping a one-class dataset is a data error") {
  fixture::TempDir dir;
  std::vector<fixture::ClassVideos> classes(1);
  classes[0].name = "only";
  classes[0].videos.push_back(fixture::translating_square_video(48, 32, 10, 2.0, 12, 8));
  fixture::write_corpus(dir.path(), classes);
  CHECK_THROWS_AS(hn::run_sweep(dir.path(), small_grid(), {}), mw::DataError);
}

TEST_CASE("bench measures throughput on a replayed stream") {
  mw::PipelineConfig cfg;
  cfg.output_width = 32;
  cfg.output_height = 32;

  SUBCASE("a full run reports coherent numbers") {
    auto stream = bouncing_stream(330);
    hn::BenchReport report = hn::run_bench(*stream, cfg, 3);
    CHECK(report.frames_processed == 330);
    CHECK(report.wall_seconds > 0.0);
    CHECK(report.fps == doctest::Approx(report.frames_processed / report.wall_seconds));
    CHECK(report.classifier_ms > 0.0);

    REQUIRE(!report.stage_breakdown.empty());
    double stage_total_seconds = 0.0;
    for (const auto& stage : report.stage_breakdown) {
      CHECK(stage.mean_ms >= 0.0);
      stage_total_seconds += stage.mean_ms * report.frames_processed / 1000.0;
    }
    // Stage timers live inside the measured pass, so their sum cannot
    // exceed the wall time (small slack for timer however-granularity).
    CHECK(stage_total_seconds <= report.wall_seconds * 1.05);

    std::vector<std::string> stages;
    for (const auto& stage : report.stage_breakdown) {
      stages.push_back(stage.stage);
    }
    for (const char* expected : {"blur", "background", "morphology", "flow", "accumulate"}) {
      CHECK(std::find(stages.begin(), stages.end(), expected) != stages.end());
    }
  }

  SUBCASE("streams shorter than 300 frames are rejected") {
    auto stream = bouncing_stream(200);
    CHECK_THROWS_AS(hn::run_bench(*stream, cfg, 1), mw::UsageError);
  }

  SUBCASE("repeat must be positive") {
    auto stream = bouncing_stream(330);
    CHECK_THROWS_AS(hn::run_bench(*stream, cfg, 0), mw::UsageError);
  }
}

TEST_CASE("sweep CSV serialization") {
  SUBCASE("header and formatting are fixed") {
    std::string text = hn::sweep_csv_text(fixed_rows());
    std::istringstream in(text);
    std::string line;
    REQUIRE(static_cast<bool>(std::getline(in, line)));
    CHECK(line == hn::kSweepCsvHeader);
    REQUIRE(static_cast<bool>(std::getline(in, line)));
    CHECK(line == "0.7,1,15,0.875000,0.750000,0.812500,0.781250,1.500");
    REQUIRE(static_cast<bool>(std::getline(in, line)));
    CHECK(line == "0.85,2,21,0.500000,0.500000,0.500000,0.500000,0.250");
    CHECK(!std::getline(in, line));
  }

  SUBCASE("files round-trip exactly") {
    fixture::TempDir dir;
    std::filesystem::path path = dir / "sweep.csv";
    std::vector<hn::SweepRow> rows = fixed_rows();
    hn::write_sweep_csv(path, rows);
    std::vector<hn::SweepRow> back = hn::read_sweep_csv(path);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].beta == rows[i].beta);
      CHECK(back[i].d == rows[i].d);
      CHECK(back[i].w == rows[i].w);
      CHECK(back[i].accuracy == rows[i].accuracy);
      CHECK(back[i].precision_macro == rows[i].precision_macro);
      CHECK(back[i].recall_macro == rows[i].recall_macro);
      CHECK(back[i].f1_macro == rows[i].f1_macro);
      CHECK(back[i].train_seconds == rows[i].train_seconds);
      CHECK(!back[i].failed);
    }
  }

  SUBCASE("failed rows carry nan and read back as failed") {
    hn::SweepRow bad;
    bad.beta = 0.9;
    bad.d = 1;
    bad.w = 15;
    bad.failed = true;
    bad.accuracy = bad.precision_macro = bad.recall_macro = bad.f1_macro =
        std::nan("");
    fixture::TempDir dir;
    std::filesystem::path path = dir / "failed.csv";
    hn::write_sweep_csv(path, {bad});
    std::vector<hn::SweepRow> back = hn::read_sweep_csv(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].failed);
    CHECK(back[0].beta == doctest::Approx(0.9));
  }

  SUBCASE("malformed files raise data errors naming the spot") {
    fixture::TempDir dir;
    std::filesystem::path path = dir / "bad.csv";

    std::ofstream(path) << "wrong,header\n";
    CHECK_THROWS_AS(hn::read_sweep_csv(path), mw::DataError);

    std::ofstream(path, std::ios::trunc)
        << hn::kSweepCsvHeader << "\n0.7,1,15,0.5\n";
    CHECK_THROWS_AS(hn::read_sweep_csv(path), mw::DataError);

    std::ofstream(path, std::ios::trunc)
        << hn::kSweepCsvHeader << "\n0.7,1,15,x,0.5,0.5,0.5,1.0\n";
    try {
      hn::read_sweep_csv(path);
      FAIL("expected a data error");
    } catch (const mw::DataError& e) {
      std::string msg = e.what();
      CHECK(msg.find("bad.csv") != std::string::npos);
      CHECK(msg.find("2") != std::string::npos);
    }

    CHECK_THROWS_AS(hn::read_sweep_csv(dir / "absent.csv"), mw::DataError);
  }
}

TEST_CASE("sweep SVG rendering") {
  SUBCASE("produces a structurally sound document") {
    std::string svg = hn::sweep_svg_text(fixed_rows());
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") == svg.size() - 7);
    CHECK(svg.find("<rect") != std::string::npos);

    // Panels for each swept parameter plus a metric legend.
    CHECK(svg.find("by beta") != std::string::npos);
    CHECK(svg.find("by frame distance") != std::string::npos);
    CHECK(svg.find("by flow window") != std::string::npos);
    CHECK(svg.find("accuracy") != std::string::npos);
    CHECK(svg.find("f1_macro") != std::string::npos);

    // Balanced group tags.
    std::size_t open = 0, close = 0, pos = 0;
    while ((pos = svg.find("<g", pos)) != std::string::npos) {
      ++open;
      pos += 2;
    }
    pos = 0;
    while ((pos = svg.find("</g>", pos)) != std::string::npos) {
      ++close;
      pos += 4;
    }
    CHECK(open == close);
  }

  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(hn::sweep_svg_text({}), mw::UsageError);
  }

  SUBCASE("emit_report dispatches on format") {
    fixture::TempDir dir;
    hn::emit_report(fixed_rows(), hn::ReportFormat::csv, dir / "out.csv");
    hn::emit_report(fixed_rows(), hn::ReportFormat::svg, dir / "out.svg");
    CHECK(std::filesystem::file_size(dir / "out.csv") > 0);
    CHECK(std::filesystem::file_size(dir / "out.svg") > 0);

    CHECK(hn::parse_report_format("csv") == hn::ReportFormat::csv);
    CHECK(hn::parse_report_format("svg") == hn::ReportFormat::svg);
    CHECK_THROWS_AS(hn::parse_report_format("pdf"), mw::UsageError);
  }
}
