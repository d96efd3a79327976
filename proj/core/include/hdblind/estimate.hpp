#pragma once

#include <cstdint>

#include "hdblind/mc.hpp"
#include "hdblind/model.hpp"

// Alice/Bob parameter estimation: streaming moments over a trial batch,
// then channel transmission and excess noise in shot-noise units.
namespace hdblind::estimate {

// Numerically stable streaming moments (Welford update, Chan merge).
// Merging two accumulators equals accumulating the concatenated data up to
// floating-point reordering (tested at 1e-9 relative).
struct moment_accumulator {
  uint64_t n = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double m2_a = 0.0;   // sum of squared deviations of a
  double m2_b = 0.0;   // sum of squared deviations of b
  double co_ab = 0.0;  // sum of co-deviations

  void add(double a, double b);
  void merge(const moment_accumulator& other);

  double variance_a() const { return n > 1 ? m2_a / double(n - 1) : 0.0; }
  double variance_b() const { return n > 1 ? m2_b / double(n - 1) : 0.0; }
  double covariance() const { return n > 1 ? co_ab / double(n - 1) : 0.0; }
};

struct estimate_result {
  double v_a_hat = 0.0;
  double v_b_hat = 0.0;
  double cov_ab_hat = 0.0;
  double n0_hat = 1.0;  // identically 1 in SNU, kept explicit
  double t_hat = 0.0;
  double xi_hat = 0.0;
  double clipped_fraction = 0.0;
  uint64_t n = 0;
  // configured v_a and the sample estimate disagree by more than 3%
  bool v_a_mismatch = false;
};

// Single pass over [first, last). Throws numerical_error when the range
// holds fewer than 2 samples.
moment_accumulator accumulate_range(const mc::trial_batch& batch,
                                    uint64_t first, uint64_t last);

// Whole batch, accumulated in fixed 65536-pulse blocks merged in index
// order: bit-identical regardless of how the batch was generated and
// parallel-reducible by construction.
moment_accumulator accumulate(const mc::trial_batch& batch);

double clipped_fraction(const mc::trial_batch& batch);

// T_hat = (Cov/V_A)^2/eta, xi_hat = (V_B - eta*T_hat*V_A - 1 - v_ele)/
// (eta*T_hat), with V_A taken as configured (known to Alice) and means
// recentered. Throws numerical_error when Cov <= 0 or T_hat = 0 (total
// decorrelation, e.g. extreme blinding).
estimate_result estimate_channel(const moment_accumulator& acc,
                                 const model::detector_model& det,
                                 const model::protocol_model& proto);

// accumulate + estimate_channel + clipped fraction in one call.
estimate_result estimate_batch(const mc::trial_batch& batch,
                               const model::detector_model& det,
                               const model::protocol_model& proto);

}  // namespace hdblind::estimate
