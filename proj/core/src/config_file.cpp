#include "mw/harness/config_file.hpp"

#include <fstream>
#include <sstream>

#include "mw/error.hpp"

namespace mw::harness {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) {
    return "";
  }
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw UsageError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& origin, int line, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) {
      fail(origin, line, "trailing characters in number '" + value + "'");
    }
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& origin, int line, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) {
      fail(origin, line, "trailing characters in integer '" + value + "'");
    }
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    fail(origin, line, "expected an integer, got '" + value + "'");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

}  // namespace

FileConfig parse_config_text(const std::string& text, const std::string& origin) {
  FileConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(origin, line_no, "unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "pipeline" && section != "train" && section != "sweep") {
        fail(origin, line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(origin, line_no, "expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      fail(origin, line_no, "empty key or value");
    }
    if (section.empty()) {
      fail(origin, line_no, "key '" + key + "' appears before any section");
    }

    if (section == "pipeline") {
      PipelineConfig& p = cfg.pipeline;
      if (key == "beta") {
        p.beta = parse_double(origin, line_no, value);
      } else if (key == "flow_frame_distance") {
        p.flow_frame_distance = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "flow_window") {
        p.flow_window = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "fallback_interval") {
        p.fallback_interval = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "interval_min") {
        p.interval_min = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "interval_max") {
        p.interval_max = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "trim_count") {
        p.trim_count = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "output_width") {
        p.output_width = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "output_height") {
        p.output_height = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "eigen_threshold") {
        p.eigen_threshold = parse_double(origin, line_no, value);
      } else if (key == "rng_seed") {
        p.rng_seed = static_cast<std::uint64_t>(parse_int(origin, line_no, value));
      } else if (key == "blur_kernel") {
        p.blur.kernel = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "blur_sigma") {
        p.blur.sigma = parse_double(origin, line_no, value);
      } else if (key == "knn_history") {
        p.knn.history = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "knn_matches") {
        p.knn.required_matches = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "knn_radius") {
        p.knn.radius = parse_double(origin, line_no, value);
      } else if (key == "knn_update_probability") {
        p.knn.update_probability = parse_double(origin, line_no, value);
      } else if (key == "knn_shadow_low") {
        p.knn.shadow_low = parse_double(origin, line_no, value);
      } else if (key == "knn_shadow_high") {
        p.knn.shadow_high = parse_double(origin, line_no, value);
      } else if (key == "morph_radius") {
        p.morph_radius = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "flow_stats") {
        if (value == "cartesian") {
          p.flow_stats = FlowStatsMode::cartesian_mean;
        } else if (value == "polar") {
          p.flow_stats = FlowStatsMode::polar_mean;
        } else {
          fail(origin, line_no, "flow_stats is '" + value + "', expected 'cartesian' or 'polar'");
        }
      } else if (key == "interval_mode") {
        if (value == "direct") {
          p.interval_mode = IntervalMode::direct;
        } else if (value == "inverse") {
          p.interval_mode = IntervalMode::inverse;
        } else {
          fail(origin, line_no, "interval_mode is '" + value + "', expected 'direct' or 'inverse'");
        }
      } else if (key == "inverse_scale") {
        p.inverse_scale = parse_double(origin, line_no, value);
      } else {
        fail(origin, line_no, "unknown [pipeline] key '" + key + "'");
      }
    } else if (section == "train") {
      cnn::TrainConfig& t = cfg.train;
      if (key == "learning_rate") {
        t.learning_rate = parse_double(origin, line_no, value);
      } else if (key == "momentum") {
        t.momentum = parse_double(origin, line_no, value);
      } else if (key == "batch_size") {
        t.batch_size = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "epochs") {
        t.epochs = static_cast<int>(parse_int(origin, line_no, value));
      } else if (key == "seed") {
        t.seed = static_cast<std::uint64_t>(parse_int(origin, line_no, value));
      } else if (key == "early_stop_patience") {
        t.early_stop_patience = static_cast<int>(parse_int(origin, line_no, value));
      } else {
        fail(origin, line_no, "unknown [train] key '" + key + "'");
      }
    } else {  // sweep
      if (key == "betas") {
        for (const std::string& item : split_list(value)) {
          cfg.sweep_betas.push_back(parse_double(origin, line_no, item));
        }
      } else if (key == "distances") {
        for (const std::string& item : split_list(value)) {
          cfg.sweep_distances.push_back(static_cast<int>(parse_int(origin, line_no, item)));
        }
      } else if (key == "windows") {
        for (const std::string& item : split_list(value)) {
          cfg.sweep_windows.push_back(static_cast<int>(parse_int(origin, line_no, item)));
        }
      } else {
        fail(origin, line_no, "unknown [sweep] key '" + key + "'");
      }
    }
  }
  return cfg;
}

FileConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open config file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

}  // namespace mw::harness
