#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hdblind/errors.hpp"
#include "hdblind/estimate.hpp"
#include "hdblind/mc.hpp"
#include "oracles.hpp"

using namespace hdblind;

namespace {

mc::trial_batch make_batch(const std::vector<double>& a,
                           const std::vector<double>& b) {
  mc::trial_batch batch;
  batch.x_a = a;
  batch.x_b = b;
  batch.clipped_hi.assign(a.size(), 0);
  batch.clipped_lo.assign(a.size(), 0);
  return batch;
}

// adversarial data: a large common offset plus per-point scales spanning
// seven decades, where naive sum-of-squares accumulation loses most of its
// digits but a stable streaming update keeps full agreement
mc::trial_batch adversarial_batch(std::size_t n) {
  oracle::test_rng rg(99);
  const double scales[4] = {1.0e-3, 1.0, 30.0, 300.0};
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = scales[i % 4];
    a[i] = 1.0e4 + s * rg.uniform(-1.0, 1.0);
    b[i] = -1.0e4 + s * rg.uniform(-1.0e-3, 1.0e-3) + 0.3 * (a[i] - 1.0e4);
  }
  return make_batch(a, b);
}

}  // namespace

TEST_SUITE_BEGIN("estimate");

TEST_CASE("streaming moments equal two-pass moments") {
  const auto batch = adversarial_batch(40000);
  const auto acc = estimate::accumulate(batch);
  const auto ref = oracle::two_pass(batch.x_a, batch.x_b);
  CHECK(acc.n == ref.n);
  CHECK(acc.mean_a == doctest::Approx(ref.mean_x).epsilon(1e-12));
  CHECK(acc.mean_b == doctest::Approx(ref.mean_y).epsilon(1e-12));
  CHECK(acc.variance_a() == doctest::Approx(ref.var_x).epsilon(1e-9));
  CHECK(acc.variance_b() == doctest::Approx(ref.var_y).epsilon(1e-9));
  CHECK(acc.covariance() == doctest::Approx(ref.cov).epsilon(1e-9));
}

TEST_CASE("merge equals single-pass accumulation") {
  const auto batch = adversarial_batch(30000);
  const auto whole = estimate::accumulate_range(batch, 0, 30000);
  for (uint64_t cut : {2ull, 7ull, 12345ull, 29998ull}) {
    auto left = estimate::accumulate_range(batch, 0, cut);
    const auto right = estimate::accumulate_range(batch, cut, 30000);
    left.merge(right);
    CHECK(left.n == whole.n);
    CHECK(left.mean_a == doctest::Approx(whole.mean_a).epsilon(1e-12));
    CHECK(left.variance_a() ==
          doctest::Approx(whole.variance_a()).epsilon(1e-9));
    CHECK(left.variance_b() ==
          doctest::Approx(whole.variance_b()).epsilon(1e-9));
    CHECK(left.covariance() ==
          doctest::Approx(whole.covariance()).epsilon(1e-9));
  }
}

TEST_CASE("merging an empty accumulator is the identity") {
  const auto batch = adversarial_batch(100);
  auto acc = estimate::accumulate_range(batch, 0, 100);
  const auto before = acc;
  acc.merge(estimate::moment_accumulator{});
  CHECK(acc.n == before.n);
  CHECK(acc.mean_a == before.mean_a);
  CHECK(acc.m2_a == before.m2_a);
  estimate::moment_accumulator empty;
  empty.merge(before);
  CHECK(empty.n == before.n);
  CHECK(empty.mean_b == before.mean_b);
}

TEST_CASE("blocked accumulation is partition invariant bit for bit") {
  // accumulate() must give the same bits as any other partitioning that
  // respects the fixed block size, because it always reduces in block order
  mc::sim_scenario scn;
  scn.protocol.v_a = 1.2;
  scn.detector.eta = 0.55;
  scn.n = 300000;  // not a multiple of 65536: exercises the tail block
  scn.threads = 1;
  const auto batch = mc::run(scn);
  const auto whole = estimate::accumulate(batch);

  constexpr uint64_t bs = 65536;
  const uint64_t n = batch.n();
  // pairwise-style reduction over the same blocks
  std::vector<estimate::moment_accumulator> blocks;
  for (uint64_t lo = 0; lo < n; lo += bs)
    blocks.push_back(
        estimate::accumulate_range(batch, lo, std::min(lo + bs, n)));
  while (blocks.size() > 1) {
    std::vector<estimate::moment_accumulator> next;
    for (std::size_t i = 0; i + 1 < blocks.size(); i += 2) {
      auto m = blocks[i];
      m.merge(blocks[i + 1]);
      next.push_back(m);
    }
    if (blocks.size() % 2) next.push_back(blocks.back());
    blocks = next;
  }
  // block-ordered linear reduction must match accumulate() exactly
  estimate::moment_accumulator linear;
  for (uint64_t lo = 0; lo < n; lo += bs) {
    const auto m = estimate::accumulate_range(batch, lo, std::min(lo + bs, n));
    linear.merge(m);
  }
  CHECK(linear.mean_b == whole.mean_b);
  CHECK(linear.m2_b == whole.m2_b);
  CHECK(linear.co_ab == whole.co_ab);
  // tree reduction only agrees to rounding, not bit for bit
  CHECK(blocks[0].variance_b() ==
        doctest::Approx(whole.variance_b()).epsilon(1e-9));
  CHECK(blocks[0].covariance() ==
        doctest::Approx(whole.covariance()).epsilon(1e-9));
}

TEST_CASE("estimates are identical for any generator thread count") {
  mc::sim_scenario scn;
  scn.protocol.v_a = 1.2;
  scn.detector.eta = 0.55;
  scn.attack.active = true;
  scn.attack.r = 0.1274;
  scn.n = 200000;
  scn.threads = 1;
  const auto e1 = estimate::estimate_batch(mc::run(scn), scn.detector,
                                           scn.protocol);
  scn.threads = 4;
  const auto e4 = estimate::estimate_batch(mc::run(scn), scn.detector,
                                           scn.protocol);
  CHECK(e1.t_hat == e4.t_hat);
  CHECK(e1.xi_hat == e4.xi_hat);
  CHECK(e1.v_b_hat == e4.v_b_hat);
}

TEST_CASE("estimator inverts the honest channel exactly on synthetic data") {
  // build data whose sample moments are known, then check the algebra
  // t_hat = (cov/v_a)^2/eta, xi_hat = (v_b - eta t v_a - 1 - v_ele)/(eta t)
  const auto batch = adversarial_batch(20000);
  const auto acc = estimate::accumulate(batch);
  model::detector_model det;
  det.eta = 0.55;
  det.v_ele = 0.01;
  model::protocol_model proto;
  proto.v_a = acc.variance_a();  // use the sample value: no mismatch flag
  const auto est = estimate::estimate_channel(acc, det, proto);
  const double t_expect =
      (acc.covariance() / proto.v_a) * (acc.covariance() / proto.v_a) / 0.55;
  CHECK(est.t_hat == doctest::Approx(t_expect).epsilon(1e-12));
  const double xi_expect =
      (acc.variance_b() - 0.55 * t_expect * proto.v_a - 1.0 - 0.01) /
      (0.55 * t_expect);
  CHECK(est.xi_hat == doctest::Approx(xi_expect).epsilon(1e-9));
  CHECK(est.n0_hat == 1.0);
  CHECK_FALSE(est.v_a_mismatch);
}

TEST_CASE("honest simulation estimates recover the configured channel") {
  mc::sim_scenario scn;
  scn.protocol.v_a = 1.2;
  scn.detector.eta = 0.55;
  scn.channel.length_km = 25.0;
  scn.clipping = false;
  scn.n = 1000000;
  const auto est =
      estimate::estimate_batch(mc::run(scn), scn.detector, scn.protocol);
  CHECK(est.t_hat ==
        doctest::Approx(0.29853826189179594).epsilon(0.01));
  CHECK(std::abs(est.xi_hat) < 0.03);
  CHECK(est.clipped_fraction == 0.0);
  CHECK_FALSE(est.v_a_mismatch);
  CHECK(est.n == scn.n);
}

TEST_CASE("attack estimates hit the linear closed forms") {
  // unclipped attack at r=0.1274: t_hat -> T and
  // xi_hat -> 2 + xi_tech + xi_ext = 2.52775 plus the tiny jitter residual
  mc::sim_scenario scn;
  scn.protocol.v_a = 1.2;
  scn.detector.eta = 0.55;
  scn.attack.active = true;
  scn.attack.r = 0.1274;
  scn.clipping = false;
  scn.n = 1000000;
  const auto est =
      estimate::estimate_batch(mc::run(scn), scn.detector, scn.protocol);
  CHECK(est.t_hat ==
        doctest::Approx(0.29853826189179594).epsilon(0.01));
  CHECK(est.xi_hat == doctest::Approx(2.52874997).epsilon(0.02));
}

TEST_CASE("clipped attack estimates match the censored oracle") {
  // the saturated attack drives xi_hat below its linear value because the
  // rail eats the variance; expected values from the censored analytics
  mc::sim_scenario scn;
  scn.protocol.v_a = 1.2;
  scn.detector.eta = 0.55;
  scn.attack.active = true;
  scn.attack.r = 0.1274;
  scn.n = 1000000;
  const auto est =
      estimate::estimate_batch(mc::run(scn), scn.detector, scn.protocol);
  const auto c = oracle::censored_gaussian(
      18.8964737451, std::sqrt(1.62224599405), -20.0, 20.0);
  const double cov_c = 0.486253332552 * c.p_in;
  const double t_c = (cov_c / 1.2) * (cov_c / 1.2) / 0.55;
  const double xi_c = (c.var - 0.55 * t_c * 1.2 - 1.01) / (0.55 * t_c);
  CHECK(est.t_hat == doctest::Approx(t_c).epsilon(0.02));
  CHECK(std::abs(est.xi_hat - xi_c) < 0.1);
  CHECK(est.clipped_fraction == doctest::Approx(c.p_hi + c.p_lo).epsilon(0.05));
  // frozen spot values for the same point, so drift shows up even if the
  // oracle and the estimator ever drift together
  CHECK(t_c == doctest::Approx(0.194359045).epsilon(1e-6));
  CHECK(xi_c == doctest::Approx(0.0197173329).epsilon(1e-4));
}

TEST_CASE("v_a mismatch flag fires on a 5 percent modulation error") {
  mc::sim_scenario scn;
  scn.protocol.v_a = 1.2;
  scn.detector.eta = 0.55;
  scn.clipping = false;
  scn.n = 200000;
  const auto batch = mc::run(scn);
  const auto acc = estimate::accumulate(batch);
  auto proto = scn.protocol;
  proto.v_a = 1.2 * 1.05;
  const auto est = estimate::estimate_channel(acc, scn.detector, proto);
  CHECK(est.v_a_mismatch);
  proto.v_a = 1.2;
  CHECK_FALSE(estimate::estimate_channel(acc, scn.detector, proto)
                  .v_a_mismatch);
}

TEST_CASE("degenerate inputs throw") {
  SUBCASE("fewer than two samples") {
    const auto batch = make_batch({1.0}, {2.0});
    CHECK_THROWS_AS(estimate::accumulate_range(batch, 0, 1), numerical_error);
    CHECK_THROWS_AS(estimate::accumulate(batch), numerical_error);
  }
  SUBCASE("nonpositive covariance has no transmission estimate") {
    std::vector<double> a(1000), b(1000);
    oracle::test_rng rg(5);
    for (std::size_t i = 0; i < 1000; ++i) {
      a[i] = rg.uniform(-1.0, 1.0);
      b[i] = -0.5 * a[i];  // anticorrelated
    }
    const auto acc = estimate::accumulate(make_batch(a, b));
    model::detector_model det;
    model::protocol_model proto;
    proto.v_a = 1.0;
    CHECK_THROWS_AS(estimate::estimate_channel(acc, det, proto),
                    numerical_error);
  }
}

TEST_CASE("clipped fraction counts both rails") {
  auto batch = make_batch({0.0, 0.0, 0.0, 0.0}, {1.0, 2.0, 3.0, 4.0});
  batch.clipped_hi = {1, 0, 0, 1};
  batch.clipped_lo = {0, 1, 0, 0};
  CHECK(estimate::clipped_fraction(batch) == doctest::Approx(0.75));
}

TEST_SUITE_END();
