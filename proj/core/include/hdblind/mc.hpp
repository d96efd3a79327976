#pragma once

#include <cstdint>
#include <vector>

#include "hdblind/model.hpp"
#include "hdblind/rng.hpp"

// Seeded Monte Carlo engine: per-pulse (X_A, X_B) pairs for the honest
// channel and for the intercept-resend + blinding attack, with or without
// saturation clipping. Only the X quadrature is generated; P is
// statistically identical by symmetry. Sifting is a no-op with a single
// quadrature and is therefore not modeled.
namespace hdblind::mc {

struct trial_batch {
  std::vector<double> x_a;          // Alice symbols, SNU
  std::vector<double> x_b;          // Bob HD outputs, SNU
  std::vector<uint8_t> clipped_hi;  // x_b pinned at alpha_hi
  std::vector<uint8_t> clipped_lo;  // x_b pinned at alpha_lo

  uint64_t n() const { return static_cast<uint64_t>(x_a.size()); }
};

struct sim_scenario {
  model::protocol_model protocol;
  model::detector_model detector;
  model::channel_model channel;
  model::attack_model attack;
  bool clipping = true;
  uint64_t seed = 12345;
  uint64_t n = 1000000;
  unsigned threads = 1;  // 0 = hardware concurrency
};

void validate(const sim_scenario& scn);

// Alice's draw for one pulse: modulation symbol x_a ~ N(0, v_a) and the
// transmitted quadrature x = x_a + vacuum.
struct alice_draw {
  double x_a;
  double x;
};
alice_draw sample_alice(uint64_t seed, uint64_t pulse, double v_a);

// Eve heterodynes x (half the signal plus her vacuum) and re-prepares with
// the given gain: x_e = gain*(x + vac')/sqrt(2) + vac''. At gain = sqrt(2)
// this is x + vac' + vac'', i.e. Var(x_e | x_a) = 3.
double eve_intercept_resend(double x, uint64_t seed, uint64_t pulse,
                            double gain);

// Scenario constants hoisted out of the per-pulse loop.
struct pulse_consts {
  double sqrt_eta_t;       // sqrt(eta*T)
  double sqrt_loss_vac;    // sqrt(1 - eta*T)
  double tech_std;         // sqrt(xi_tech), inside the eta*T branch
  double ele_std;          // sqrt(v_ele)
  double intr_std;         // sqrt(eta*T*xi_intrinsic), honest mode only
  double d_ext;            // deterministic external offset
  double ext_shot_std;     // sqrt(eta * N0_ext): external shot noise in SNU
  double ext_jitter_std;   // d_ext * f_ext: per-pulse intensity jitter
  bool attack;
};
pulse_consts derive_pulse_consts(const sim_scenario& scn);

// Bob's unclipped HD output for one pulse, SNU.
double bob_measure_linear(const sim_scenario& scn, const pulse_consts& pc,
                          const alice_draw& a, uint64_t pulse);

// Full batch. Deterministic for a fixed seed; identical output for any
// partition (thread) count. Allocation failure propagates as an exception,
// never as silent truncation.
trial_batch run(const sim_scenario& scn);

// Detector-characterization mode: LO only, raw outputs mapped to volts and
// clamped by the DAQ at +-daq_limit_v.
struct lo_char_settings {
  double volts_per_photon = 1.6953e-7;
  double v_ele_volts2 = 1e-6;  // dark electronic variance, V^2
  double daq_limit_v = 0.5;
  uint64_t n_per_point = 20000;
};

struct lo_char_point {
  double power_uw;
  double mean_v;
  double var_v2;
};

// Per power point: n_per_point draws of the LO-only HD output at port
// transmission t_port, empirical mean and variance in volts.
std::vector<lo_char_point> simulate_lo_characterization(
    const model::detector_model& det, double t_port,
    const std::vector<double>& powers_uw, const lo_char_settings& s,
    uint64_t seed);

}  // namespace hdblind::mc
