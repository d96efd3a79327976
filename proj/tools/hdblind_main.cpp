// hdblind: homodyne-detector blinding attack simulator for GMCS CV-QKD.
// Subcommands reproduce the standard figures; `run` is the generic
// single-scenario driver. Exit codes: 0 ok, 1 bad configuration, 2 I/O
// failure, 3 numerical-domain error.
#include <cstdio>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdblind/commands.hpp"
#include "hdblind/config.hpp"
#include "hdblind/errors.hpp"
#include "hdblind/presets.hpp"
#include "hdblind/version.hpp"

namespace {

std::string default_preset_for(const std::string& sub) {
  if (sub == "fig4") return "fig4b";
  if (sub == "run") return "default";
  return sub;  // fig2, fig3, fig5, fig6, guard have presets of the same name
}

void apply_format(hdblind::config::run_config& cfg, const std::string& formats) {
  cfg.write_csv = cfg.write_json = cfg.write_svg = false;
  std::string token;
  for (size_t i = 0; i <= formats.size(); ++i) {
    if (i == formats.size() || formats[i] == ',') {
      if (token == "csv") cfg.write_csv = true;
      else if (token == "json") cfg.write_json = true;
      else if (token == "svg") cfg.write_svg = true;
      else if (!token.empty())
        throw hdblind::config_error("unknown output format '" + token +
                                    "' (expected csv, json, svg)");
      token.clear();
    } else {
      token.push_back(formats[i]);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"homodyne-detector blinding attack simulator"};
  app.set_version_flag("--version", hdblind::version_string);
  app.require_subcommand(1);
  app.fallthrough();

  std::string preset, config_file, out_dir, format;
  std::uint64_t seed = 0, n = 0;
  unsigned threads = 1;
  std::vector<std::string> sets;

  auto* opt_preset =
      app.add_option("--preset", preset, "named parameter preset");
  auto* opt_config =
      app.add_option("--config", config_file, "key=value config file");
  auto* opt_seed = app.add_option("--seed", seed, "simulation seed");
  auto* opt_n = app.add_option("--n", n, "number of pulses");
  auto* opt_threads =
      app.add_option("--threads", threads, "worker threads (0 = all cores)");
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_format = app.add_option(
      "--format", format, "comma list of outputs to write: csv,json,svg");
  app.add_option("--set", sets, "config override key=value (repeatable)")
      ->take_all();

  const char* subs[] = {"fig2", "fig3", "fig4", "fig5", "fig6", "guard", "run"};
  const char* descs[] = {
      "HD voltage statistics vs LO power, two balance settings",
      "analytic external-light noise budget vs photon ratio r",
      "quadrature scatter and linear/clipped estimates at one attack point",
      "estimated transmission vs distance for several r",
      "estimated excess noise vs r per distance with null-key thresholds",
      "threshold-guard verdicts and ROC table",
      "generic single-scenario run"};
  for (int i = 0; i < 7; ++i) app.add_subcommand(subs[i], descs[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit 0, parse errors exit 1
  }

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    hdblind::config::run_config cfg = hdblind::presets::make(
        opt_preset->count() ? preset : default_preset_for(sub));
    if (opt_config->count()) hdblind::config::load_file(cfg, config_file);
    for (const auto& assignment : sets)
      hdblind::config::set_assignment(cfg, assignment);
    if (opt_seed->count()) cfg.scenario.seed = seed;
    if (opt_n->count()) cfg.scenario.n = n;
    if (opt_threads->count()) cfg.scenario.threads = threads;
    if (opt_out->count()) cfg.out_dir = out_dir;
    if (opt_format->count()) apply_format(cfg, format);

    if (sub == "fig2") return hdblind::commands::cmd_fig2(cfg);
    if (sub == "fig3") return hdblind::commands::cmd_fig3(cfg);
    if (sub == "fig4") return hdblind::commands::cmd_fig4(cfg);
    if (sub == "fig5") return hdblind::commands::cmd_fig5(cfg);
    if (sub == "fig6") return hdblind::commands::cmd_fig6(cfg);
    if (sub == "guard") return hdblind::commands::cmd_guard(cfg);
    return hdblind::commands::cmd_run(cfg);
  } catch (const hdblind::config_error& e) {
    std::fprintf(stderr, "hdblind: configuration error: %s\n", e.what());
    return hdblind::exit_config;
  } catch (const hdblind::io_error& e) {
    std::fprintf(stderr, "hdblind: I/O error: %s\n", e.what());
    return hdblind::exit_io;
  } catch (const hdblind::numerical_error& e) {
    std::fprintf(stderr, "hdblind: numerical error: %s\n", e.what());
    return hdblind::exit_numerical;
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "hdblind: out of memory\n");
    return hdblind::exit_numerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hdblind: error: %s\n", e.what());
    return hdblind::exit_numerical;
  }
}
