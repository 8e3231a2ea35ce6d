#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mw/harness/sweep.hpp"

namespace mw::harness {

inline constexpr const char* kSweepCsvHeader =
    "beta,d,w,accuracy,precision_macro,recall_macro,f1_macro,train_seconds";

// CSV with the fixed column set above, one line per row, in row order.
// Formatting is deterministic, so equal rows give byte-identical files.
// Failed cells carry nan metrics.
std::string sweep_csv_text(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows);

// Parses a file produced by write_sweep_csv. Header or value errors
// raise DataError naming the line.
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

// Grouped-bar SVG: one panel per swept parameter (beta, d, w), bars for
// the four quality metrics averaged over rows sharing each value.
std::string sweep_svg_text(const std::vector<SweepRow>& rows);

enum class ReportFormat { csv, svg };
ReportFormat parse_report_format(const std::string& name);

// Renders rows to `path` in the requested format. SVG requires at
// least one row.
void emit_report(const std::vector<SweepRow>& rows, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace mw::harness
