#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "hdblind/config.hpp"
#include "hdblind/mc.hpp"

// Deterministic file output: RFC-4180 CSV with LF line endings, stable-key
// JSON, self-contained SVG charts. Identical inputs produce byte-identical
// files.
namespace hdblind::io {

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

// '#'-prefixed reproducibility header lines placed before the CSV body and
// mirrored into JSON outputs: tool, version, subcommand, preset, seed, and
// the hash of the fully resolved config, then the full config echo.
std::vector<std::string> header_lines(const config::run_config& cfg,
                                      const std::string& subcommand);

class csv_writer {
 public:
  // Throws io_error when the file cannot be opened.
  csv_writer(const std::string& path);
  void comment(const std::string& line);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

// Create the directory (and parents). Throws io_error on failure.
void ensure_dir(const std::string& dir);

// Columnar batch dump: pulse_index,x_a,x_b,clipped_hi,clipped_lo.
// stride > 1 subsamples deterministically (every stride-th pulse).
void dump_batch_csv(csv_writer& w, const mc::trial_batch& batch,
                    uint64_t stride = 1);

struct svg_series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Fixed-layout line/scatter chart, 880x560, 6-color palette, no external
// assets. Series with draw_points=true render markers instead of lines.
// header comments are emitted as XML comments before the root element.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<svg_series>& series,
                     bool draw_points = false,
                     const std::vector<std::string>& header = {});

}  // namespace hdblind::io
