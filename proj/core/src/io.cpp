#include "hdblind/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <system_error>

#include "hdblind/errors.hpp"
#include "hdblind/version.hpp"

namespace hdblind::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // canonicalize -0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> header_lines(const config::run_config& cfg,
                                      const std::string& subcommand) {
  std::vector<std::string> lines;
  lines.push_back(std::string("tool=hdblind version=") + version_string +
                  " subcommand=" + subcommand + " preset=" + cfg.preset_name +
                  " seed=" + std::to_string(cfg.scenario.seed) +
                  " config_hash=" + config::config_hash(cfg));
  std::string echo;
  const std::string canon = config::canonical(cfg);
  for (char c : canon) {
    if (c == '\n') {
      if (!echo.empty()) lines.push_back("config: " + echo);
      echo.clear();
    } else {
      echo.push_back(c);
    }
  }
  return lines;
}

csv_writer::csv_writer(const std::string& path) : path_(path) {
  out_.open(path, std::ios::binary);
  if (!out_) throw io_error("cannot open '" + path + "' for writing");
}

void csv_writer::comment(const std::string& line) { out_ << "# " << line << "\n"; }

namespace {

bool needs_quoting(const std::string& f) {
  return f.find_first_of(",\"\n") != std::string::npos;
}

std::string quote(const std::string& f) {
  std::string q = "\"";
  for (char c : f) {
    if (c == '"') q += "\"\"";
    else q += c;
  }
  q += "\"";
  return q;
}

}  // namespace

void csv_writer::row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << (needs_quoting(fields[i]) ? quote(fields[i]) : fields[i]);
  }
  out_ << "\n";
}

void csv_writer::close() {
  if (out_.is_open()) {
    out_.close();
    if (out_.fail()) throw io_error("write failed for '" + path_ + "'");
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory '" + dir + "': " + ec.message());
  if (!std::filesystem::is_directory(dir, ec))
    throw io_error("'" + dir + "' is not a directory");
}

void dump_batch_csv(csv_writer& w, const mc::trial_batch& batch,
                    uint64_t stride) {
  if (stride == 0) stride = 1;
  w.row({"pulse_index", "x_a", "x_b", "clipped_hi", "clipped_lo"});
  for (uint64_t i = 0; i < batch.n(); i += stride) {
    w.row({std::to_string(i), format_double(batch.x_a[i]),
           format_double(batch.x_b[i]), batch.clipped_hi[i] ? "1" : "0",
           batch.clipped_lo[i] ? "1" : "0"});
  }
}

namespace {

struct axis_scale {
  double lo = 0.0, hi = 1.0;
  std::vector<double> ticks;
};

// round the raw span out to 1/2/5 * 10^k tick steps
axis_scale nice_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double span = hi - lo;
  const double raw_step = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw_step) {
      step = mag * m;
      break;
    }
  }
  axis_scale ax;
  ax.lo = std::floor(lo / step) * step;
  ax.hi = std::ceil(hi / step) * step;
  for (double t = ax.lo; t <= ax.hi + step * 0.5; t += step) {
    // snap near-zero accumulator dust so labels read "0"
    ax.ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ax;
}

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  char buf[32];
  if (a >= 1e5 || a < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.2g", v);
  } else {
    std::snprintf(buf, sizeof buf, "%g", v);
  }
  return buf;
}

std::string esc_xml(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      default: o += c;
    }
  }
  return o;
}

const char* palette[6] = {"#1f6fb2", "#d1495b", "#3f8f4e",
                          "#8a5fbf", "#c98a2b", "#4f5d75"};

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<svg_series>& series,
                     bool draw_points, const std::vector<std::string>& header) {
  const double W = 880, H = 560;
  const double ml = 80, mr = 30, mt = 50, mb = 60;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  const axis_scale ax = nice_axis(xmin, xmax);
  const axis_scale ay = nice_axis(ymin, ymax);
  auto px = [&](double x) { return ml + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  char buf[256];
  for (const auto& line : header) out << "<!-- " << esc_xml(line) << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"560\" "
         "viewBox=\"0 0 880 560\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"880\" height=\"560\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"440\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
      << esc_xml(title) << "</text>\n";

  // grid + ticks
  for (double t : ax.ticks) {
    const double x = px(t);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#dddddd\"/>\n",
                  x, mt, x, mt + ph);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" "
                  "font-size=\"12\">%s</text>\n",
                  x, mt + ph + 18, tick_label(t).c_str());
    out << buf;
  }
  for (double t : ay.ticks) {
    const double y = py(t);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#dddddd\"/>\n",
                  ml, y, ml + pw, y);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\" "
                  "font-size=\"12\">%s</text>\n",
                  ml - 8, y + 4, tick_label(t).c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                "fill=\"none\" stroke=\"#333333\"/>\n",
                ml, mt, pw, ph);
  out << buf;
  out << "<text x=\"" << (ml + pw / 2) << "\" y=\"" << (H - 16)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << esc_xml(x_label)
      << "</text>\n";
  out << "<text x=\"20\" y=\"" << (mt + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
      << (mt + ph / 2) << ")\">" << esc_xml(y_label) << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = palette[si % 6];
    const auto& pts = series[si].points;
    if (!draw_points && pts.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"";
      for (const auto& [x, y] : pts) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
        out << buf;
      }
      out << "\"/>\n";
    } else {
      for (const auto& [x, y] : pts) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.2\" fill=\"%s\" "
                      "fill-opacity=\"0.6\"/>\n",
                      px(x), py(y), color);
        out << buf;
      }
    }
    // legend
    const double ly = mt + 16 + 18 * double(si);
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"12\" height=\"12\" "
                  "fill=\"%s\"/>\n",
                  ml + pw - 170, ly - 10, color);
    out << buf;
    out << "<text x=\"" << (ml + pw - 152) << "\" y=\"" << ly
        << "\" font-size=\"12\">" << esc_xml(series[si].name) << "</text>\n";
  }
  out << "</svg>\n";
  out.close();
  if (out.fail()) throw io_error("write failed for '" + path + "'");
}

}  // namespace hdblind::io
