#include "hdblind/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hdblind/errors.hpp"
#include "hdblind/io.hpp"

namespace hdblind::config {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw config_error("bad numeric value for " + key + ": '" + v + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  // accept scientific notation for counts (1e6 etc.)
  const double d = parse_double(key, v);
  if (!(d >= 0.0 && d <= 1.8e19) || d != std::floor(d))
    throw config_error("bad count value for " + key + ": '" + v + "'");
  return uint64_t(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw config_error("bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

std::vector<std::string> key_names() {
  return {
      "attack.active",       "attack.f_ext",        "attack.gain",
      "attack.r",            "attack.t_ext",        "attack.xi_tech",
      "channel.length_km",   "channel.loss_db_per_km",
      "channel.xi_intrinsic",
      "detector.alpha_hi",   "detector.alpha_lo",   "detector.eta",
      "detector.f_lo",       "detector.i_lo",       "detector.t_lo",
      "detector.v_ele",
      "fig2.daq_limit_v",    "fig2.eps1",           "fig2.eps2",
      "fig2.f_lo",           "fig2.n_per_point",    "fig2.power_max_uw",
      "fig2.power_min_uw",   "fig2.power_step_uw",  "fig2.v_ele_volts2",
      "fig2.volts_per_photon",
      "guard.block_size",    "guard.max_fraction",  "guard.n_blocks",
      "guard.s_hi",          "guard.s_lo",
      "protocol.beta",       "protocol.v_a",        "protocol.va_policy",
      "protocol.xi_design",
      "sim.clipping",        "sim.n",               "sim.seed",
      "sim.threads",
  };
}

void set_key(run_config& cfg, const std::string& key,
             const std::string& value) {
  auto& scn = cfg.scenario;
  if (key == "attack.active") scn.attack.active = parse_bool(key, value);
  else if (key == "attack.f_ext") scn.attack.f_ext = parse_double(key, value);
  else if (key == "attack.gain") scn.attack.gain = parse_double(key, value);
  else if (key == "attack.r") scn.attack.r = parse_double(key, value);
  else if (key == "attack.t_ext") scn.attack.t_ext = parse_double(key, value);
  else if (key == "attack.xi_tech")
    scn.attack.xi_tech = parse_double(key, value);
  else if (key == "channel.length_km")
    scn.channel.length_km = parse_double(key, value);
  else if (key == "channel.loss_db_per_km")
    scn.channel.loss_db_per_km = parse_double(key, value);
  else if (key == "channel.xi_intrinsic")
    scn.channel.xi_intrinsic = parse_double(key, value);
  else if (key == "detector.alpha_hi")
    scn.detector.alpha_hi = parse_double(key, value);
  else if (key == "detector.alpha_lo")
    scn.detector.alpha_lo = parse_double(key, value);
  else if (key == "detector.eta") scn.detector.eta = parse_double(key, value);
  else if (key == "detector.f_lo")
    scn.detector.f_lo = parse_double(key, value);
  else if (key == "detector.i_lo")
    scn.detector.i_lo = parse_double(key, value);
  else if (key == "detector.t_lo")
    scn.detector.t_lo = parse_double(key, value);
  else if (key == "detector.v_ele")
    scn.detector.v_ele = parse_double(key, value);
  else if (key == "fig2.daq_limit_v")
    cfg.fig2.daq_limit_v = parse_double(key, value);
  else if (key == "fig2.eps1") cfg.fig2.eps1 = parse_double(key, value);
  else if (key == "fig2.eps2") cfg.fig2.eps2 = parse_double(key, value);
  else if (key == "fig2.f_lo") cfg.fig2.f_lo = parse_double(key, value);
  else if (key == "fig2.n_per_point")
    cfg.fig2.n_per_point = parse_u64(key, value);
  else if (key == "fig2.power_max_uw")
    cfg.fig2.power_max_uw = parse_double(key, value);
  else if (key == "fig2.power_min_uw")
    cfg.fig2.power_min_uw = parse_double(key, value);
  else if (key == "fig2.power_step_uw")
    cfg.fig2.power_step_uw = parse_double(key, value);
  else if (key == "fig2.v_ele_volts2")
    cfg.fig2.v_ele_volts2 = parse_double(key, value);
  else if (key == "fig2.volts_per_photon")
    cfg.fig2.volts_per_photon = parse_double(key, value);
  else if (key == "guard.block_size")
    cfg.guard_block_size = parse_u64(key, value);
  else if (key == "guard.max_fraction")
    cfg.guard_pol.max_fraction = parse_double(key, value);
  else if (key == "guard.n_blocks")
    cfg.guard_n_blocks = parse_u64(key, value);
  else if (key == "guard.s_hi") cfg.guard_pol.s_hi = parse_double(key, value);
  else if (key == "guard.s_lo") cfg.guard_pol.s_lo = parse_double(key, value);
  else if (key == "protocol.beta")
    scn.protocol.beta = parse_double(key, value);
  else if (key == "protocol.v_a") scn.protocol.v_a = parse_double(key, value);
  else if (key == "protocol.va_policy") {
    if (value != "fixed" && value != "optimize")
      throw config_error("protocol.va_policy must be 'fixed' or 'optimize'");
    cfg.va_policy = value;
  } else if (key == "protocol.xi_design")
    cfg.xi_design = parse_double(key, value);
  else if (key == "sim.clipping") scn.clipping = parse_bool(key, value);
  else if (key == "sim.n") scn.n = parse_u64(key, value);
  else if (key == "sim.seed") scn.seed = parse_u64(key, value);
  else if (key == "sim.threads")
    scn.threads = unsigned(parse_u64(key, value));
  else
    throw config_error("unknown config key: '" + key + "'");
}

void set_assignment(run_config& cfg, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw config_error("expected key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty())
    throw config_error("expected key=value, got '" + assignment + "'");
  set_key(cfg, key, value);
}

void load_file(run_config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read config file '" + path + "'");
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      set_assignment(cfg, line);
    } catch (const config_error& e) {
      throw config_error(path + ":" + std::to_string(lineno) + ": " +
                         e.what());
    }
  }
}

namespace {

std::string value_of(const run_config& cfg, const std::string& key) {
  const auto& scn = cfg.scenario;
  auto d = [](double v) { return io::format_double(v); };
  auto u = [](uint64_t v) { return std::to_string(v); };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  if (key == "attack.active") return b(scn.attack.active);
  if (key == "attack.f_ext") return d(scn.attack.f_ext);
  if (key == "attack.gain") return d(scn.attack.gain);
  if (key == "attack.r") return d(scn.attack.r);
  if (key == "attack.t_ext") return d(scn.attack.t_ext);
  if (key == "attack.xi_tech") return d(scn.attack.xi_tech);
  if (key == "channel.length_km") return d(scn.channel.length_km);
  if (key == "channel.loss_db_per_km") return d(scn.channel.loss_db_per_km);
  if (key == "channel.xi_intrinsic") return d(scn.channel.xi_intrinsic);
  if (key == "detector.alpha_hi") return d(scn.detector.alpha_hi);
  if (key == "detector.alpha_lo") return d(scn.detector.alpha_lo);
  if (key == "detector.eta") return d(scn.detector.eta);
  if (key == "detector.f_lo") return d(scn.detector.f_lo);
  if (key == "detector.i_lo") return d(scn.detector.i_lo);
  if (key == "detector.t_lo") return d(scn.detector.t_lo);
  if (key == "detector.v_ele") return d(scn.detector.v_ele);
  if (key == "fig2.daq_limit_v") return d(cfg.fig2.daq_limit_v);
  if (key == "fig2.eps1") return d(cfg.fig2.eps1);
  if (key == "fig2.eps2") return d(cfg.fig2.eps2);
  if (key == "fig2.f_lo") return d(cfg.fig2.f_lo);
  if (key == "fig2.n_per_point") return u(cfg.fig2.n_per_point);
  if (key == "fig2.power_max_uw") return d(cfg.fig2.power_max_uw);
  if (key == "fig2.power_min_uw") return d(cfg.fig2.power_min_uw);
  if (key == "fig2.power_step_uw") return d(cfg.fig2.power_step_uw);
  if (key == "fig2.v_ele_volts2") return d(cfg.fig2.v_ele_volts2);
  if (key == "fig2.volts_per_photon") return d(cfg.fig2.volts_per_photon);
  if (key == "guard.block_size") return u(cfg.guard_block_size);
  if (key == "guard.max_fraction") return d(cfg.guard_pol.max_fraction);
  if (key == "guard.n_blocks") return u(cfg.guard_n_blocks);
  if (key == "guard.s_hi") return d(cfg.guard_pol.s_hi);
  if (key == "guard.s_lo") return d(cfg.guard_pol.s_lo);
  if (key == "protocol.beta") return d(scn.protocol.beta);
  if (key == "protocol.v_a") return d(scn.protocol.v_a);
  if (key == "protocol.va_policy") return cfg.va_policy;
  if (key == "protocol.xi_design") return d(cfg.xi_design);
  if (key == "sim.clipping") return b(scn.clipping);
  if (key == "sim.n") return u(scn.n);
  if (key == "sim.seed") return u(scn.seed);
  if (key == "sim.threads") return u(scn.threads);
  throw config_error("unknown config key: '" + key + "'");
}

}  // namespace

std::string canonical(const run_config& cfg) {
  std::ostringstream out;
  for (const auto& key : key_names())
    out << key << " = " << value_of(cfg, key) << "\n";
  return out.str();
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const run_config& cfg) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical(cfg))));
  return buf;
}

void validate(const run_config& cfg) {
  mc::validate(cfg.scenario);
  guard::validate(cfg.guard_pol, cfg.scenario.detector);
  if (cfg.scenario.n < 2)
    throw config_error("sim.n must be >= 2 for estimation");
  if (cfg.va_policy != "fixed" && cfg.va_policy != "optimize")
    throw config_error("protocol.va_policy must be 'fixed' or 'optimize'");
  if (!(cfg.xi_design >= 0.0))
    throw config_error("protocol.xi_design must be >= 0");
  if (cfg.guard_block_size < 1 || cfg.guard_n_blocks < 1)
    throw config_error("guard.block_size and guard.n_blocks must be >= 1");
  const auto& f = cfg.fig2;
  if (!(f.eps1 > 0.0 && f.eps1 < 0.5 && f.eps2 > 0.0 && f.eps2 < 0.5))
    throw config_error("fig2 imbalance factors must be in (0,0.5)");
  if (!(f.volts_per_photon > 0.0))
    throw config_error("fig2.volts_per_photon must be > 0");
  if (!(f.v_ele_volts2 >= 0.0))
    throw config_error("fig2.v_ele_volts2 must be >= 0");
  if (!(f.daq_limit_v > 0.0))
    throw config_error("fig2.daq_limit_v must be > 0");
  if (!(f.power_min_uw >= 0.0 && f.power_max_uw > f.power_min_uw &&
        f.power_step_uw > 0.0))
    throw config_error("fig2 power grid is malformed");
  if (f.n_per_point < 2)
    throw config_error("fig2.n_per_point must be >= 2");
}

}  // namespace hdblind::config
