#pragma once

#include <cstdint>
#include <vector>

#include "hdblind/mc.hpp"
#include "hdblind/model.hpp"

// Threshold countermeasure: per-block fraction of recorded HD samples at or
// outside security thresholds [s_lo, s_hi] strictly inside the detection
// limits; blocks exceeding max_fraction are discarded.
namespace hdblind::guard {

struct guard_policy {
  double s_hi = 19.0;
  double s_lo = -19.0;
  double max_fraction = 1e-3;
};

// alpha_lo < s_lo < s_hi < alpha_hi, max_fraction in [0, 1].
// (max_fraction = 1 is the degenerate never-discard policy.)
void validate(const guard_policy& policy, const model::detector_model& det);

struct guard_verdict {
  double fraction_outside = 0.0;
  bool accept = true;  // accept <=> fraction_outside <= max_fraction
  uint64_t n = 0;
};

// fraction_outside = #{i : x_b[i] >= s_hi or x_b[i] <= s_lo}/n.
// Operates on what Bob actually records (the clipped data).
guard_verdict evaluate(const mc::trial_batch& batch,
                       const guard_policy& policy);

struct roc_row {
  double s_hi = 0.0;
  double s_lo = 0.0;
  double max_fraction = 0.0;
  double false_alarm = 0.0;  // honest blocks discarded / n_blocks
  double detection = 0.0;    // attack blocks discarded / n_blocks
  uint64_t n_blocks = 0;
  uint64_t block_size = 0;
};

// Empirical false-alarm and detection rates per policy over n_blocks
// independent blocks of block_size pulses from each scenario. Scenarios
// must share the detector configuration.
std::vector<roc_row> roc_sweep(const mc::sim_scenario& honest,
                               const mc::sim_scenario& attack,
                               const std::vector<guard_policy>& grid,
                               uint64_t n_blocks, uint64_t block_size);

}  // namespace hdblind::guard
