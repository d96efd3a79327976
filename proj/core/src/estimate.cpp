#include "hdblind/estimate.hpp"

#include <cmath>

#include "hdblind/errors.hpp"

namespace hdblind::estimate {

void moment_accumulator::add(double a, double b) {
  ++n;
  const double inv = 1.0 / double(n);
  const double da = a - mean_a;
  const double db = b - mean_b;
  mean_a += da * inv;
  mean_b += db * inv;
  // co-deviation uses the pre-update delta of a and post-update delta of b
  m2_a += da * (a - mean_a);
  m2_b += db * (b - mean_b);
  co_ab += da * (b - mean_b);
}

void moment_accumulator::merge(const moment_accumulator& other) {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double na = double(n), nb = double(other.n);
  const double nt = na + nb;
  const double da = other.mean_a - mean_a;
  const double db = other.mean_b - mean_b;
  m2_a += other.m2_a + da * da * na * nb / nt;
  m2_b += other.m2_b + db * db * na * nb / nt;
  co_ab += other.co_ab + da * db * na * nb / nt;
  mean_a += da * nb / nt;
  mean_b += db * nb / nt;
  n += other.n;
}

moment_accumulator accumulate_range(const mc::trial_batch& batch,
                                    uint64_t first, uint64_t last) {
  if (last - first < 2)
    throw numerical_error("moment estimation needs at least 2 samples");
  moment_accumulator acc;
  for (uint64_t i = first; i < last; ++i) acc.add(batch.x_a[i], batch.x_b[i]);
  return acc;
}

namespace {
constexpr uint64_t accumulate_block = 1u << 16;
}

moment_accumulator accumulate(const mc::trial_batch& batch) {
  const uint64_t n = batch.n();
  if (n < 2)
    throw numerical_error("moment estimation needs at least 2 samples");
  // fixed block structure merged in index order: the result is a pure
  // function of the batch, independent of who generated it and how
  moment_accumulator total;
  for (uint64_t first = 0; first < n; first += accumulate_block) {
    const uint64_t last = std::min(n, first + accumulate_block);
    moment_accumulator blk;
    for (uint64_t i = first; i < last; ++i)
      blk.add(batch.x_a[i], batch.x_b[i]);
    total.merge(blk);
  }
  return total;
}

double clipped_fraction(const mc::trial_batch& batch) {
  const uint64_t n = batch.n();
  if (n == 0) return 0.0;
  uint64_t c = 0;
  for (uint64_t i = 0; i < n; ++i)
    c += uint64_t(batch.clipped_hi[i]) + uint64_t(batch.clipped_lo[i]);
  return double(c) / double(n);
}

estimate_result estimate_channel(const moment_accumulator& acc,
                                 const model::detector_model& det,
                                 const model::protocol_model& proto) {
  if (acc.n < 2)
    throw numerical_error("moment estimation needs at least 2 samples");
  estimate_result est;
  est.n = acc.n;
  est.v_a_hat = acc.variance_a();
  est.v_b_hat = acc.variance_b();
  est.cov_ab_hat = acc.covariance();
  est.n0_hat = 1.0;
  if (!(est.cov_ab_hat > 0.0))
    throw numerical_error(
        "Alice-Bob covariance is not positive: estimation degenerate "
        "(total decorrelation)");
  // V_A is known to Alice; the sample estimate only cross-checks it
  const double v_a = proto.v_a;
  const double ratio = est.cov_ab_hat / v_a;
  est.t_hat = ratio * ratio / det.eta;
  if (!(est.t_hat > 0.0))
    throw numerical_error("estimated transmission is zero");
  est.xi_hat = (est.v_b_hat - det.eta * est.t_hat * v_a - 1.0 - det.v_ele) /
               (det.eta * est.t_hat);
  est.v_a_mismatch = std::fabs(est.v_a_hat - v_a) > 0.03 * v_a;
  return est;
}

estimate_result estimate_batch(const mc::trial_batch& batch,
                               const model::detector_model& det,
                               const model::protocol_model& proto) {
  estimate_result est = estimate_channel(accumulate(batch), det, proto);
  est.clipped_fraction = clipped_fraction(batch);
  return est;
}

}  // namespace hdblind::estimate
