#pragma once

#include <string>
#include <vector>

#include "hdblind/config.hpp"

// Named parameter presets. "default" is the realistic operating point every
// other preset derives from; the figure presets reproduce the published
// operating points.
namespace hdblind::presets {

std::vector<std::string> names();

// Fresh default config (eta = 0.6, v_ele = 0.01, i_lo = 1e8, limits +-20,
// L = 25 km at 0.21 dB/km, attack off, optimizer V_A policy, n = 1e6).
config::run_config defaults();

// Apply a named preset on top of defaults. Throws config_error for an
// unknown name.
config::run_config make(const std::string& name);

}  // namespace hdblind::presets
