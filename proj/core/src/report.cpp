#include "mw/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mw/error.hpp"

namespace mw::harness {

namespace {

std::string format_row(const SweepRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%g,%d,%d,%.6f,%.6f,%.6f,%.6f,%.3f",
                row.beta, row.d, row.w, row.accuracy, row.precision_macro,
                row.recall_macro, row.f1_macro, row.train_seconds);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

double parse_field(const std::string& value, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": bad numeric field '" + value + "'");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw RuntimeError("cannot open for writing: " + path.string());
  }
  out << text;
  if (!out) {
    throw RuntimeError("write failed: " + path.string());
  }
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct MetricColumn {
  const char* name;
  const char* color;
  double SweepRow::* field;
};

// Series names match the CSV columns so chart and file cross-reference.
constexpr MetricColumn kMetricColumns[] = {
    {"accuracy", "#4c78a8", &SweepRow::accuracy},
    {"precision_macro", "#f58518", &SweepRow::precision_macro},
    {"recall_macro", "#54a24b", &SweepRow::recall_macro},
    {"f1_macro", "#b279a2", &SweepRow::f1_macro},
};

struct PanelGroup {
  std::string label;                 // parameter value shown under the group
  double metric_mean[4] = {0, 0, 0, 0};
};

// Average each metric over the successful rows sharing one value of the
// swept parameter identified by `key`.
std::vector<PanelGroup> panel_groups(const std::vector<SweepRow>& rows,
                                     double (*key)(const SweepRow&)) {
  std::map<double, std::pair<PanelGroup, int>> grouped;
  for (const SweepRow& row : rows) {
    if (row.failed || !std::isfinite(row.accuracy)) {
      continue;
    }
    auto& slot = grouped[key(row)];
    if (slot.second == 0) {
      slot.first.label = format_value(key(row));
    }
    for (int m = 0; m < 4; ++m) {
      slot.first.metric_mean[m] += row.*(kMetricColumns[m].field);
    }
    ++slot.second;
  }
  std::vector<PanelGroup> out;
  for (auto& [value, slot] : grouped) {
    for (int m = 0; m < 4; ++m) {
      slot.first.metric_mean[m] /= slot.second;
    }
    out.push_back(std::move(slot.first));
  }
  return out;
}

void render_panel(std::ostringstream& svg, int origin_x, int origin_y,
                  int width, int height, const std::string& title,
                  const std::vector<PanelGroup>& groups) {
  svg << "<g transform=\"translate(" << origin_x << "," << origin_y << ")\">\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"-12\" text-anchor=\"middle\" "
      << "font-size=\"14\" font-weight=\"bold\">" << xml_escape(title)
      << "</text>\n";
  svg << "<line x1=\"0\" y1=\"" << height << "\" x2=\"" << width << "\" y2=\""
      << height << "\" stroke=\"#333\"/>\n";
  svg << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"" << height
      << "\" stroke=\"#333\"/>\n";
  // Horizontal grid lines every 0.25 of the [0, 1] metric range.
  for (int tick = 0; tick <= 4; ++tick) {
    double frac = tick / 4.0;
    int y = height - static_cast<int>(frac * height);
    svg << "<line x1=\"0\" y1=\"" << y << "\" x2=\"" << width << "\" y2=\""
        << y << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"-6\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << format_value(frac)
        << "</text>\n";
  }
  if (groups.empty()) {
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-size=\"12\">no successful rows"
        << "</text>\n</g>\n";
    return;
  }
  double group_width = static_cast<double>(width) / groups.size();
  double bar_width = group_width / 5.0;  // 4 bars + one bar of spacing
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double group_x = g * group_width;
    for (int m = 0; m < 4; ++m) {
      double value = std::clamp(groups[g].metric_mean[m], 0.0, 1.0);
      double bar_h = value * height;
      double x = group_x + bar_width * (0.5 + m);
      svg << "<rect x=\"" << format_value(x) << "\" y=\""
          << format_value(height - bar_h) << "\" width=\""
          << format_value(bar_width * 0.9) << "\" height=\""
          << format_value(bar_h) << "\" fill=\"" << kMetricColumns[m].color
          << "\"/>\n";
    }
    svg << "<text x=\"" << format_value(group_x + group_width / 2) << "\" y=\""
        << height + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << xml_escape(groups[g].label) << "</text>\n";
  }
  svg << "</g>\n";
}

}  // namespace

std::string sweep_csv_text(const std::vector<SweepRow>& rows) {
  std::string text = kSweepCsvHeader;
  text += '\n';
  for (const SweepRow& row : rows) {
    text += format_row(row);
    text += '\n';
  }
  return text;
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows) {
  write_text(path, sweep_csv_text(rows));
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open CSV: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != kSweepCsvHeader) {
    throw DataError(path.string() + ": unexpected header '" + line + "'");
  }
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 8) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 8 fields, got " + std::to_string(fields.size()));
    }
    std::string where = path.string() + ":" + std::to_string(line_no);
    SweepRow row;
    row.beta = parse_field(fields[0], where);
    row.d = static_cast<int>(parse_field(fields[1], where));
    row.w = static_cast<int>(parse_field(fields[2], where));
    row.accuracy = parse_field(fields[3], where);
    row.precision_macro = parse_field(fields[4], where);
    row.recall_macro = parse_field(fields[5], where);
    row.f1_macro = parse_field(fields[6], where);
    row.train_seconds = parse_field(fields[7], where);
    row.failed = !std::isfinite(row.accuracy);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_svg_text(const std::vector<SweepRow>& rows) {
  if (rows.empty()) {
    throw UsageError("SVG report needs at least one row");
  }
  constexpr int kPanelWidth = 300;
  constexpr int kPanelHeight = 200;
  constexpr int kMarginX = 60;
  constexpr int kMarginTop = 60;
  constexpr int kGap = 60;
  int total_width = kMarginX * 2 + kPanelWidth * 3 + kGap * 2;
  int total_height = kMarginTop + kPanelHeight + 70;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_width
      << "\" height=\"" << total_height << "\" viewBox=\"0 0 " << total_width
      << " " << total_height << "\">\n";
  svg << "<rect width=\"" << total_width << "\" height=\"" << total_height
      << "\" fill=\"white\"/>\n";

  // Legend along the top edge.
  for (int m = 0; m < 4; ++m) {
    int x = kMarginX + m * 120;
    svg << "<rect x=\"" << x << "\" y=\"12\" width=\"12\" height=\"12\" fill=\""
        << kMetricColumns[m].color << "\"/>\n";
    svg << "<text x=\"" << x + 18 << "\" y=\"22\" font-size=\"12\">"
        << kMetricColumns[m].name << "</text>\n";
  }

  struct Panel {
    const char* title;
    double (*key)(const SweepRow&);
  };
  const Panel panels[] = {
      {"by beta", [](const SweepRow& r) { return r.beta; }},
      {"by frame distance", [](const SweepRow& r) { return static_cast<double>(r.d); }},
      {"by flow window", [](const SweepRow& r) { return static_cast<double>(r.w); }},
  };
  for (int p = 0; p < 3; ++p) {
    render_panel(svg, kMarginX + p * (kPanelWidth + kGap), kMarginTop,
                 kPanelWidth, kPanelHeight, panels[p].title,
                 panel_groups(rows, panels[p].key));
  }
  svg << "</svg>\n";
  return svg.str();
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") {
    return ReportFormat::csv;
  }
  if (name == "svg") {
    return ReportFormat::svg;
  }
  throw UsageError("unknown report format '" + name + "' (expected csv or svg)");
}

void emit_report(const std::vector<SweepRow>& rows, ReportFormat format,
                 const std::filesystem::path& path) {
  if (format == ReportFormat::csv) {
    write_text(path, sweep_csv_text(rows));
  } else {
    write_text(path, sweep_svg_text(rows));
  }
}

}  // namespace mw::harness
