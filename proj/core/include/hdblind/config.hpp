#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdblind/guard.hpp"
#include "hdblind/mc.hpp"

// Flat key=value configuration: one human-editable document, dotted keys,
// '#' comments. CLI --set overrides file values, explicit flags override
// both. Unknown keys are rejected.
namespace hdblind::config {

struct fig2_settings {
  double eps1 = 0.007;  // imbalance factor, better-balanced setting
  double eps2 = 0.009;  // imbalance factor, less-balanced setting
  double f_lo = 0.001;
  double volts_per_photon = 1.6953e-7;
  double v_ele_volts2 = 1e-6;
  double daq_limit_v = 0.5;
  double power_min_uw = 0.0;
  double power_max_uw = 70.0;
  double power_step_uw = 2.5;
  uint64_t n_per_point = 20000;
};

struct run_config {
  mc::sim_scenario scenario;
  // "fixed": use protocol.v_a as configured; "optimize": argmax of the key
  // rate at the scenario distance, assuming protocol.xi_design excess noise
  std::string va_policy = "optimize";
  double xi_design = 0.01;
  guard::guard_policy guard_pol;
  uint64_t guard_block_size = 100000;
  uint64_t guard_n_blocks = 100;
  fig2_settings fig2;

  // output plumbing (not part of the config hash)
  std::string preset_name = "default";
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = true;
  bool write_svg = true;
};

// The canonical key list, alphabetical. Every key round-trips through
// set_key/canonical.
std::vector<std::string> key_names();

// Parse and assign one key. Throws config_error on unknown key or
// unparsable value.
void set_key(run_config& cfg, const std::string& key,
             const std::string& value);

// "key = value" assignment string, split and applied.
void set_assignment(run_config& cfg, const std::string& assignment);

// Load a config file over cfg. Throws io_error when unreadable,
// config_error on syntax/unknown keys.
void load_file(run_config& cfg, const std::string& path);

// Fully-resolved config as sorted "key = value" lines (the reproducibility
// echo; also the hash input).
std::string canonical(const run_config& cfg);

uint64_t fnv1a64(const std::string& s);

// "0x" + 16 hex digits of the FNV-1a 64 hash of canonical(cfg).
std::string config_hash(const run_config& cfg);

// Cross-field validation of everything reachable from the config.
// Throws config_error.
void validate(const run_config& cfg);

}  // namespace hdblind::config
