#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "hdblind/errors.hpp"
#include "hdblind/io.hpp"
#include "hdblind/presets.hpp"

using namespace hdblind;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("format_double round-trips and normalizes zero") {
  for (double v : {1.0, -1.0, 0.1, 1e-300, 1e300, 3.141592653589793,
                   0.29853826189179594, 18.8964737451, -2.5e-7}) {
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(nan("")) == "nan");
  CHECK(io::format_double(INFINITY) == "inf");
  CHECK(io::format_double(-INFINITY) == "-inf");
}

TEST_CASE("csv writer quotes exactly when needed") {
  const std::string path = "io_test_quote.csv";
  {
    io::csv_writer w(path);
    w.comment("note");
    w.row({"plain", "with,comma", "with\"quote", "with\nnewline", ""});
    w.row({"1", "2"});
    w.close();
  }
  const std::string body = slurp(path);
  CHECK(body ==
        "# note\n"
        "plain,\"with,comma\",\"with\"\"quote\",\"with\nnewline\",\n"
        "1,2\n");
  std::remove(path.c_str());
}

TEST_CASE("csv writer refuses unwritable paths") {
  CHECK_THROWS_AS(io::csv_writer("no_such_dir_xyz/file.csv"), io_error);
}

TEST_CASE("ensure_dir creates nested directories and rejects files") {
  io::ensure_dir("io_test_dir/a/b");
  std::ofstream("io_test_dir/a/b/touch.txt") << "x";
  CHECK(slurp("io_test_dir/a/b/touch.txt") == "x");
  // a plain file where a directory is wanted
  CHECK_THROWS_AS(io::ensure_dir("io_test_dir/a/b/touch.txt"), io_error);
  std::remove("io_test_dir/a/b/touch.txt");
  std::remove("io_test_dir/a/b");
  std::remove("io_test_dir/a");
  std::remove("io_test_dir");
}

TEST_CASE("header lines carry the reproducibility fields") {
  auto cfg = presets::make("fig4b");
  cfg.scenario.seed = 777;
  const auto lines = io::header_lines(cfg, "fig4");
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0].find("tool=hdblind") != std::string::npos);
  CHECK(lines[0].find("version=") != std::string::npos);
  CHECK(lines[0].find("subcommand=fig4") != std::string::npos);
  CHECK(lines[0].find("preset=fig4b") != std::string::npos);
  CHECK(lines[0].find("seed=777") != std::string::npos);
  CHECK(lines[0].find("config_hash=0x") != std::string::npos);
  // one echo line per config key, in canonical order
  CHECK(lines.size() == 1 + config::key_names().size());
  CHECK(lines[1].find("config: ") == 0);
}

TEST_CASE("batch dump honors the stride") {
  mc::trial_batch b;
  for (int i = 0; i < 10; ++i) {
    b.x_a.push_back(i);
    b.x_b.push_back(2 * i);
    b.clipped_hi.push_back(i == 3);
    b.clipped_lo.push_back(0);
  }
  const std::string path = "io_test_dump.csv";
  {
    io::csv_writer w(path);
    io::dump_batch_csv(w, b, 4);
    w.close();
  }
  const std::string body = slurp(path);
  CHECK(body ==
        "pulse_index,x_a,x_b,clipped_hi,clipped_lo\n"
        "0,0,0,0,0\n"
        "4,4,8,0,0\n"
        "8,8,16,0,0\n");
  std::remove(path.c_str());
}

TEST_CASE("svg chart is a self-contained xml document") {
  const std::string path = "io_test_chart.svg";
  io::svg_series s1;
  s1.name = "curve <&> \"quoted\"";
  for (int i = 0; i <= 10; ++i)
    s1.points.push_back({double(i), std::sin(0.3 * i)});
  io::write_svg_chart(path, "title", "x axis", "y axis", {s1}, false,
                      {"repro line"});
  const std::string body = slurp(path);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
  CHECK(body.find("<!--") != std::string::npos);
  CHECK(body.find("repro line") != std::string::npos);
  // series name is escaped, never raw
  CHECK(body.find("curve <&>") == std::string::npos);
  CHECK(body.find("curve &lt;&amp;&gt;") != std::string::npos);
  CHECK(body.find("polyline") != std::string::npos);
  // no external references beyond the xmlns declaration
  std::string scrubbed = body;
  for (std::size_t p; (p = scrubbed.find("http://www.w3.org")) !=
                      std::string::npos;) {
    scrubbed.erase(p, 17);
  }
  CHECK(scrubbed.find("http") == std::string::npos);
  CHECK(body.find("href") == std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("svg scatter mode renders markers") {
  const std::string path = "io_test_scatter.svg";
  io::svg_series s1;
  s1.name = "pts";
  s1.points = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.5}};
  io::write_svg_chart(path, "t", "x", "y", {s1}, true, {});
  const std::string body = slurp(path);
  CHECK(body.find("circle") != std::string::npos);
  std::remove(path.c_str());
}

TEST_SUITE_END();
