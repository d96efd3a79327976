#pragma once

#include <string>

#include "hdblind/config.hpp"

// Subcommand drivers. Each writes its files under cfg.out_dir and returns
// exit_ok; typed errors propagate to the CLI's exit-code mapping.
namespace hdblind::commands {

// HD output voltage statistics vs LO power under two balance settings.
int cmd_fig2(const config::run_config& cfg);

// Analytic excess-noise budget curves vs the photon-number ratio r.
int cmd_fig3(const config::run_config& cfg);

// Quadrature scatter plus linear/clipped estimates at one attack point.
int cmd_fig4(const config::run_config& cfg);

// Transmission estimate vs distance for several r, with linear reference.
int cmd_fig5(const config::run_config& cfg);

// Excess-noise estimate vs r per distance, null-key thresholds, and the
// per-distance breach point r*.
int cmd_fig6(const config::run_config& cfg);

// Guard verdict stream and ROC table over the policy grid.
int cmd_guard(const config::run_config& cfg);

// Generic single-scenario run: simulate, estimate, key rate, threshold.
int cmd_run(const config::run_config& cfg);

}  // namespace hdblind::commands
