#include "hdblind/guard.hpp"

#include <cmath>

#include "hdblind/errors.hpp"

namespace hdblind::guard {

void validate(const guard_policy& policy, const model::detector_model& det) {
  if (!(det.alpha_lo < policy.s_lo && policy.s_lo < policy.s_hi &&
        policy.s_hi < det.alpha_hi))
    throw config_error(
        "guard thresholds must satisfy alpha_lo < s_lo < s_hi < alpha_hi");
  if (!(policy.max_fraction >= 0.0 && policy.max_fraction <= 1.0))
    throw config_error("guard.max_fraction must be in [0,1]");
}

guard_verdict evaluate(const mc::trial_batch& batch,
                       const guard_policy& policy) {
  if (!(policy.s_lo < policy.s_hi))
    throw config_error("guard thresholds out of order");
  const uint64_t n = batch.n();
  if (n < 1) throw config_error("guard evaluation needs at least 1 sample");
  uint64_t outside = 0;
  for (uint64_t i = 0; i < n; ++i) {
    const double x = batch.x_b[i];
    if (x >= policy.s_hi || x <= policy.s_lo) ++outside;
  }
  guard_verdict v;
  v.n = n;
  v.fraction_outside = double(outside) / double(n);
  v.accept = v.fraction_outside <= policy.max_fraction;
  return v;
}

std::vector<roc_row> roc_sweep(const mc::sim_scenario& honest,
                               const mc::sim_scenario& attack,
                               const std::vector<guard_policy>& grid,
                               uint64_t n_blocks, uint64_t block_size) {
  const auto& dh = honest.detector;
  const auto& da = attack.detector;
  if (dh.eta != da.eta || dh.v_ele != da.v_ele || dh.i_lo != da.i_lo ||
      dh.alpha_hi != da.alpha_hi || dh.alpha_lo != da.alpha_lo)
    throw config_error("ROC sweep scenarios must share the detector config");
  if (n_blocks < 1 || block_size < 1)
    throw config_error("ROC sweep needs n_blocks >= 1 and block_size >= 1");
  for (const auto& p : grid) validate(p, dh);

  // one long run per arm; blocks are consecutive pulse ranges
  mc::sim_scenario h = honest;
  mc::sim_scenario a = attack;
  h.n = n_blocks * block_size;
  a.n = n_blocks * block_size;
  const mc::trial_batch hb = mc::run(h);
  const mc::trial_batch ab = mc::run(a);

  std::vector<roc_row> rows;
  rows.reserve(grid.size());
  for (const auto& p : grid) {
    uint64_t fa = 0, det_count = 0;
    for (uint64_t b = 0; b < n_blocks; ++b) {
      const uint64_t first = b * block_size, last = first + block_size;
      uint64_t oh = 0, oa = 0;
      for (uint64_t i = first; i < last; ++i) {
        if (hb.x_b[i] >= p.s_hi || hb.x_b[i] <= p.s_lo) ++oh;
        if (ab.x_b[i] >= p.s_hi || ab.x_b[i] <= p.s_lo) ++oa;
      }
      if (double(oh) / double(block_size) > p.max_fraction) ++fa;
      if (double(oa) / double(block_size) > p.max_fraction) ++det_count;
    }
    roc_row row;
    row.s_hi = p.s_hi;
    row.s_lo = p.s_lo;
    row.max_fraction = p.max_fraction;
    row.false_alarm = double(fa) / double(n_blocks);
    row.detection = double(det_count) / double(n_blocks);
    row.n_blocks = n_blocks;
    row.block_size = block_size;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hdblind::guard
