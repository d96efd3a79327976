#pragma once

#include <cmath>

#include "hdblind/errors.hpp"

// Physical parameter types and closed-form detector/noise-budget formulas.
// All pure functions; no sampling here.
//
// Unit conventions: protocol-level quadrature amplitudes are normalized to
// sqrt(N0) and variances to N0 (shot-noise units, SNU), where N0 = eta*i_lo
// is the homodyne shot noise. Raw photon-count mode exists only for the
// detector-characterization path (see mc::simulate_lo_characterization).
namespace hdblind::model {

inline constexpr double planck_h = 6.62607015e-34;   // J s
inline constexpr double light_c = 299792458.0;       // m/s
inline constexpr double wavelength_m = 1550e-9;      // telecom C band
inline constexpr double pulse_rate_hz = 1e6;

// photons per pulse for 1 uW average optical power at the pinned
// wavelength/rate: P/(rate*h*nu)
inline double photons_per_uw() {
  const double hnu = planck_h * light_c / wavelength_m;
  return 1e-6 / (pulse_rate_hz * hnu);
}

// Homodyne detector parameters.
struct detector_model {
  double eta = 0.6;         // detection efficiency, (0,1]
  double v_ele = 0.01;      // electronic noise variance, SNU
  double t_lo = 0.5;        // HD transmission seen from the LO port, (0,1)
  double i_lo = 1e8;        // LO photons per pulse, >= 1
  double f_lo = 0.001;      // LO intensity fluctuation ratio, >= 0
  double alpha_hi = 20.0;   // upper linear detection limit, sqrt(N0)
  double alpha_lo = -20.0;  // lower linear detection limit, sqrt(N0)

  double shot_noise() const { return eta * i_lo; }  // N0, photon units
};

// Fiber channel: T = 10^(-a*L/10).
struct channel_model {
  double length_km = 25.0;
  double loss_db_per_km = 0.21;
  double xi_intrinsic = 0.0;  // honest-channel excess noise, SNU

  double transmission() const {
    return std::pow(10.0, -loss_db_per_km * length_km / 10.0);
  }
};

// Eve's intercept-resend + external blinding light knobs.
struct attack_model {
  bool active = false;
  double r = 0.0;        // photon-number ratio I_ext/I_lo
  double t_ext = 0.49;   // HD transmission seen from the signal port, (0,1)
  double f_ext = 0.001;  // external-laser intensity fluctuation ratio
  double xi_tech = 0.1;  // technical excess noise, SNU
  double gain = 1.4142135623730951;  // re-preparation gain, fixed sqrt(2)

  // intercept-resend noise penalty: two extra vacuum units when attacking
  double xi_ir() const { return active ? 2.0 : 0.0; }
};

struct protocol_model {
  double v_a = 4.0;    // Alice modulation variance, SNU, in [1,100]
  double beta = 0.95;  // reconciliation efficiency, (0,1]
};

void validate(const detector_model& det);
void validate(const channel_model& ch);
void validate(const attack_model& att);
void validate(const protocol_model& proto);

// Mean of the HD output with only the LO present (photon units):
// eta*(1 - 2*t_port)*i_lo. Decreasing in t_port; zero at perfect balance.
double hd_mean_lo_only(const detector_model& det, double t_port);

// Variance of the HD output with only the LO present (photon units):
// eta^2*(1-2t)^2*f_lo^2*i_lo^2 + 4t(1-t)*eta*i_lo + v_ele_counts.
// v_ele here is interpreted in squared photon counts for this raw-count
// formula; at t_port = 0.5, f_lo = 0 it reduces to the shot noise + v_ele.
double hd_variance_lo_only(const detector_model& det, double t_port);

// Balance quality in dB from the imbalance factor epsilon: 20*log10(2*eps).
// Negative for eps < 0.5; a well-balanced detector sits near -52 dB.
// Throws config_error for eps <= 0.
double cmrr_db(double epsilon);

// Saturation: clamp x to [alpha_lo, alpha_hi]. Idempotent, monotone.
double clip(double x, const detector_model& det);

// Noise budget of the external blinding light, all SNU.
// Shot-noise contribution at Bob: 4*t_ext*(1-t_ext)*r.
double external_shot_noise(const attack_model& att, const detector_model& det);

// Intensity-fluctuation contribution: r^2*eta*f_ext^2*(1-2*t_ext)^2*i_lo.
double external_fluctuation_noise(const attack_model& att,
                                  const detector_model& det);

// Channel-input-referred total: (shot + fluctuation)/T.
// Throws numerical_error when T = 0.
double external_excess_noise(const attack_model& att,
                             const detector_model& det,
                             const channel_model& ch);

// Deterministic HD offset from the external light, sqrt(N0) units:
// r*sqrt(eta*i_lo)*(1 - 2*t_ext).
double external_offset(const attack_model& att, const detector_model& det);

}  // namespace hdblind::model
