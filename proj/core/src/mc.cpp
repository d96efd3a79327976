#include "hdblind/mc.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "hdblind/errors.hpp"

namespace hdblind::mc {

using rng::channel;
using rng::normal;

void validate(const sim_scenario& scn) {
  model::validate(scn.protocol);
  model::validate(scn.detector);
  model::validate(scn.channel);
  model::validate(scn.attack);
  if (scn.n < 1) throw config_error("sim.n must be >= 1");
}

alice_draw sample_alice(uint64_t seed, uint64_t pulse, double v_a) {
  const double x_a =
      std::sqrt(v_a) * normal(seed, pulse, channel::alice_mod);
  const double x0 = normal(seed, pulse, channel::state_vacuum);
  return {x_a, x_a + x0};
}

double eve_intercept_resend(double x, uint64_t seed, uint64_t pulse,
                            double gain) {
  // heterodyne split: x_m = (x + vac')/sqrt(2); resend: gain*x_m + vac''
  const double x_m =
      (x + normal(seed, pulse, channel::eve_bs_vacuum)) / std::sqrt(2.0);
  return gain * x_m + normal(seed, pulse, channel::eve_reprep_vacuum);
}

pulse_consts derive_pulse_consts(const sim_scenario& scn) {
  pulse_consts pc{};
  const double t = scn.channel.transmission();
  const double eta_t = scn.detector.eta * t;
  pc.sqrt_eta_t = std::sqrt(eta_t);
  pc.sqrt_loss_vac = std::sqrt(1.0 - eta_t);
  pc.ele_std = std::sqrt(scn.detector.v_ele);
  pc.attack = scn.attack.active;
  if (scn.attack.active) {
    pc.tech_std = std::sqrt(scn.attack.xi_tech);
    pc.intr_std = 0.0;
    pc.d_ext = model::external_offset(scn.attack, scn.detector);
    // the detector sees the external light through its efficiency, exactly
    // as it sees the signal, so its shot noise enters scaled by eta
    pc.ext_shot_std = std::sqrt(
        scn.detector.eta *
        model::external_shot_noise(scn.attack, scn.detector));
    pc.ext_jitter_std = pc.d_ext * scn.attack.f_ext;
  } else {
    pc.tech_std = 0.0;
    pc.intr_std = std::sqrt(eta_t * scn.channel.xi_intrinsic);
    pc.d_ext = 0.0;
    pc.ext_shot_std = 0.0;
    pc.ext_jitter_std = 0.0;
  }
  return pc;
}

double bob_measure_linear(const sim_scenario& scn, const pulse_consts& pc,
                          const alice_draw& a, uint64_t pulse) {
  const uint64_t seed = scn.seed;
  double x_sig;
  if (pc.attack) {
    x_sig = eve_intercept_resend(a.x, seed, pulse, scn.attack.gain);
    if (pc.tech_std > 0.0)
      x_sig += pc.tech_std * normal(seed, pulse, channel::tech_noise);
  } else {
    x_sig = a.x;
  }
  double x_b = pc.sqrt_eta_t * x_sig +
               pc.sqrt_loss_vac * normal(seed, pulse, channel::channel_vacuum);
  if (pc.attack) {
    x_b += pc.d_ext;
    if (pc.ext_shot_std > 0.0)
      x_b += pc.ext_shot_std * normal(seed, pulse, channel::ext_shot);
    if (pc.ext_jitter_std != 0.0)
      x_b += pc.ext_jitter_std * normal(seed, pulse, channel::ext_jitter);
  } else if (pc.intr_std > 0.0) {
    x_b += pc.intr_std * normal(seed, pulse, channel::intrinsic);
  }
  if (pc.ele_std > 0.0)
    x_b += pc.ele_std * normal(seed, pulse, channel::electronic);
  return x_b;
}

namespace {

void run_range(const sim_scenario& scn, const pulse_consts& pc,
               uint64_t first, uint64_t last, trial_batch& out) {
  const double v_a = scn.protocol.v_a;
  const double hi = scn.detector.alpha_hi;
  const double lo = scn.detector.alpha_lo;
  for (uint64_t i = first; i < last; ++i) {
    const alice_draw a = sample_alice(scn.seed, i, v_a);
    const double x_lin = bob_measure_linear(scn, pc, a, i);
    out.x_a[i] = a.x_a;
    if (scn.clipping) {
      if (x_lin >= hi) {
        out.x_b[i] = hi;
        out.clipped_hi[i] = 1;
      } else if (x_lin <= lo) {
        out.x_b[i] = lo;
        out.clipped_lo[i] = 1;
      } else {
        out.x_b[i] = x_lin;
      }
    } else {
      out.x_b[i] = x_lin;
    }
  }
}

}  // namespace

trial_batch run(const sim_scenario& scn) {
  validate(scn);
  const pulse_consts pc = derive_pulse_consts(scn);
  trial_batch batch;
  batch.x_a.resize(scn.n);
  batch.x_b.resize(scn.n);
  batch.clipped_hi.assign(scn.n, 0);
  batch.clipped_lo.assign(scn.n, 0);

  unsigned threads = scn.threads;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (uint64_t(threads) > scn.n) threads = unsigned(scn.n);

  if (threads == 1) {
    run_range(scn, pc, 0, scn.n, batch);
    return batch;
  }
  // every pulse is a pure function of (seed, index), so disjoint ranges
  // compose to the same batch for any partition count
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const uint64_t chunk = (scn.n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const uint64_t first = uint64_t(t) * chunk;
    const uint64_t last = std::min(scn.n, first + chunk);
    if (first >= last) break;
    pool.emplace_back(run_range, std::cref(scn), std::cref(pc), first, last,
                      std::ref(batch));
  }
  for (auto& th : pool) th.join();
  return batch;
}

std::vector<lo_char_point> simulate_lo_characterization(
    const model::detector_model& det, double t_port,
    const std::vector<double>& powers_uw, const lo_char_settings& s,
    uint64_t seed) {
  if (powers_uw.empty())
    throw config_error("LO characterization needs a nonempty power grid");
  if (!(t_port > 0.0 && t_port < 1.0))
    throw config_error("LO-port transmission must be in (0,1)");
  for (double p : powers_uw)
    if (!(p >= 0.0)) throw config_error("LO powers must be >= 0");

  const double per_uw = model::photons_per_uw();
  const double g_v = s.volts_per_photon;
  const double imb = 1.0 - 2.0 * t_port;
  std::vector<lo_char_point> out;
  out.reserve(powers_uw.size());
  for (size_t p = 0; p < powers_uw.size(); ++p) {
    const double i_lo = powers_uw[p] * per_uw;
    const double mean_v = g_v * det.eta * imb * i_lo;
    const double shot_v = g_v * std::sqrt(4.0 * t_port * (1.0 - t_port) *
                                          det.eta * i_lo);
    const double ele_v = std::sqrt(s.v_ele_volts2);
    double sum = 0.0, m2 = 0.0;
    uint64_t n = 0;
    for (uint64_t j = 0; j < s.n_per_point; ++j) {
      const uint64_t pulse = uint64_t(p) * s.n_per_point + j;
      // LO intensity jitter scales the mean term; shot and electronic
      // noise add independently
      double x = mean_v * (1.0 +
                           det.f_lo * normal(seed, pulse, channel::ext_jitter)) +
                 shot_v * normal(seed, pulse, channel::ext_shot) +
                 ele_v * normal(seed, pulse, channel::electronic);
      if (x > s.daq_limit_v) x = s.daq_limit_v;
      if (x < -s.daq_limit_v) x = -s.daq_limit_v;
      ++n;
      const double d = x - sum;
      sum += d / double(n);
      m2 += d * (x - sum);
    }
    const double var = n > 1 ? m2 / double(n - 1) : 0.0;
    out.push_back({powers_uw[p], sum, var});
  }
  return out;
}

}  // namespace hdblind::mc
