#include <doctest.h>

#include <cmath>

#include "hdblind/errors.hpp"
#include "hdblind/model.hpp"

using namespace hdblind;

TEST_SUITE_BEGIN("model");

TEST_CASE("photon flux per microwatt at 1550 nm, 1 MHz") {
  // 1e-6 W / (1e6 Hz * h*c/lambda) evaluated by hand
  CHECK(model::photons_per_uw() ==
        doctest::Approx(7802880.68).epsilon(1e-8));
}

TEST_CASE("fiber transmission follows the exponential loss law") {
  model::channel_model ch;
  ch.loss_db_per_km = 0.21;
  ch.length_km = 0.0;
  CHECK(ch.transmission() == doctest::Approx(1.0));
  ch.length_km = 25.0;
  CHECK(ch.transmission() ==
        doctest::Approx(0.29853826189179594).epsilon(1e-14));
  ch.length_km = 40.0;
  CHECK(ch.transmission() ==
        doctest::Approx(0.14454397707459271).epsilon(1e-14));
  // halving per ~14.3 km at 0.21 dB/km
  ch.length_km = 10.0;
  const double t10 = ch.transmission();
  ch.length_km = 20.0;
  CHECK(ch.transmission() == doctest::Approx(t10 * t10).epsilon(1e-12));
}

TEST_CASE("lo-only homodyne mean and variance") {
  model::detector_model det;
  det.eta = 0.55;
  det.i_lo = 1e8;
  det.f_lo = 0.001;
  det.v_ele = 0.0;

  // balanced port: mean exactly zero, variance exactly the shot noise
  CHECK(model::hd_mean_lo_only(det, 0.5) == 0.0);
  CHECK(model::hd_variance_lo_only(det, 0.5) ==
        doctest::Approx(det.eta * det.i_lo).epsilon(1e-12));

  // imbalance: mean = eta*(1-2t)*i_lo, decreasing in t
  CHECK(model::hd_mean_lo_only(det, 0.49) ==
        doctest::Approx(0.55 * 0.02 * 1e8).epsilon(1e-12));
  CHECK(model::hd_mean_lo_only(det, 0.49) >
        model::hd_mean_lo_only(det, 0.495));

  // variance picks up the fluctuation term eta^2 (1-2t)^2 f^2 i_lo^2
  const double v49 = model::hd_variance_lo_only(det, 0.49);
  const double expect = 0.55 * 0.55 * 0.02 * 0.02 * 1e-6 * 1e16 +
                        4.0 * 0.49 * 0.51 * 0.55 * 1e8;
  CHECK(v49 == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("common-mode rejection in dB") {
  CHECK(model::cmrr_db(0.0012) ==
        doctest::Approx(-52.3957751658).epsilon(1e-10));
  CHECK(model::cmrr_db(0.007) ==
        doctest::Approx(-37.0774392864).epsilon(1e-10));
  CHECK(model::cmrr_db(0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(model::cmrr_db(0.0), config_error);
  CHECK_THROWS_AS(model::cmrr_db(-0.1), config_error);
}

TEST_CASE("clip is a monotone idempotent clamp") {
  model::detector_model det;
  det.alpha_hi = 2.0;
  det.alpha_lo = -1.0;
  CHECK(model::clip(0.3, det) == 0.3);
  CHECK(model::clip(5.0, det) == 2.0);
  CHECK(model::clip(-5.0, det) == -1.0);
  CHECK(model::clip(model::clip(7.0, det), det) == model::clip(7.0, det));
  for (double a : {-3.0, -1.0, 0.0, 1.0, 2.0, 4.0})
    for (double b : {-3.0, -1.0, 0.0, 1.0, 2.0, 4.0})
      if (a <= b) CHECK(model::clip(a, det) <= model::clip(b, det));
}

TEST_CASE("external light budget") {
  model::detector_model det;
  det.eta = 0.55;
  det.i_lo = 1e8;
  model::channel_model ch;  // 25 km
  model::attack_model att;
  att.active = true;
  att.r = 0.1274;
  att.t_ext = 0.49;
  att.f_ext = 0.001;

  SUBCASE("inactive attack contributes nothing") {
    att.active = false;
    CHECK(model::external_shot_noise(att, det) == 0.0);
    CHECK(model::external_fluctuation_noise(att, det) == 0.0);
    CHECK(model::external_excess_noise(att, det, ch) == 0.0);
    CHECK(model::external_offset(att, det) == 0.0);
    CHECK(att.xi_ir() == 0.0);
  }

  SUBCASE("zero injected power contributes nothing") {
    att.r = 0.0;
    CHECK(model::external_shot_noise(att, det) == 0.0);
    CHECK(model::external_fluctuation_noise(att, det) == 0.0);
    CHECK(model::external_offset(att, det) == 0.0);
    CHECK(att.xi_ir() == 2.0);
  }

  SUBCASE("reference point values") {
    // 4 t (1-t) r, r^2 eta f^2 (1-2t)^2 i_lo, r sqrt(eta i_lo)(1-2t),
    // (shot+fluct)/T evaluated by hand at r=0.1274
    CHECK(model::external_shot_noise(att, det) ==
          doctest::Approx(0.12734904).epsilon(1e-12));
    CHECK(model::external_fluctuation_noise(att, det) ==
          doctest::Approx(0.00035707672).epsilon(1e-9));
    CHECK(model::external_offset(att, det) ==
          doctest::Approx(18.8964737451).epsilon(1e-10));
    CHECK(model::external_excess_noise(att, det, ch) ==
          doctest::Approx(0.427771354703).epsilon(1e-10));
  }

  SUBCASE("offset is linear in r, noise quadratic structure") {
    const double o1 = model::external_offset(att, det);
    att.r = 0.2548;
    CHECK(model::external_offset(att, det) ==
          doctest::Approx(2.0 * o1).epsilon(1e-12));
    CHECK(model::external_fluctuation_noise(att, det) > 0.0);
  }

  SUBCASE("balanced injection leaves no offset and no fluctuation") {
    att.t_ext = 0.5;
    CHECK(model::external_offset(att, det) == 0.0);
    CHECK(model::external_fluctuation_noise(att, det) == 0.0);
    CHECK(model::external_shot_noise(att, det) ==
          doctest::Approx(att.r).epsilon(1e-12));
  }

  SUBCASE("dead channel cannot refer noise to its input") {
    ch.loss_db_per_km = 1e9;
    CHECK_THROWS_AS(model::external_excess_noise(att, det, ch),
                    numerical_error);
  }
}

TEST_CASE("validation rejects out-of-range parameters") {
  SUBCASE("detector") {
    model::detector_model det;
    CHECK_NOTHROW(model::validate(det));
    det.eta = 0.0;
    CHECK_THROWS_AS(model::validate(det), config_error);
    det = {};
    det.eta = 1.2;
    CHECK_THROWS_AS(model::validate(det), config_error);
    det = {};
    det.v_ele = -0.1;
    CHECK_THROWS_AS(model::validate(det), config_error);
    det = {};
    det.t_lo = 1.0;
    CHECK_THROWS_AS(model::validate(det), config_error);
    det = {};
    det.i_lo = 0.5;
    CHECK_THROWS_AS(model::validate(det), config_error);
    det = {};
    det.f_lo = -1e-9;
    CHECK_THROWS_AS(model::validate(det), config_error);
    det = {};
    det.alpha_hi = -25.0;  // must satisfy alpha_lo < alpha_hi
    CHECK_THROWS_AS(model::validate(det), config_error);
    det = {};
    det.alpha_lo = det.alpha_hi;
    CHECK_THROWS_AS(model::validate(det), config_error);
  }
  SUBCASE("channel") {
    model::channel_model ch;
    CHECK_NOTHROW(model::validate(ch));
    ch.length_km = -1.0;
    CHECK_THROWS_AS(model::validate(ch), config_error);
    ch = {};
    ch.loss_db_per_km = -0.1;
    CHECK_THROWS_AS(model::validate(ch), config_error);
    ch = {};
    ch.xi_intrinsic = -0.5;
    CHECK_THROWS_AS(model::validate(ch), config_error);
  }
  SUBCASE("attack") {
    model::attack_model att;
    CHECK_NOTHROW(model::validate(att));
    att.r = -0.1;
    CHECK_THROWS_AS(model::validate(att), config_error);
    att = {};
    att.t_ext = 0.0;
    CHECK_THROWS_AS(model::validate(att), config_error);
    att = {};
    att.t_ext = 1.0;
    CHECK_THROWS_AS(model::validate(att), config_error);
    att = {};
    att.f_ext = -1.0;
    CHECK_THROWS_AS(model::validate(att), config_error);
    att = {};
    att.xi_tech = -1.0;
    CHECK_THROWS_AS(model::validate(att), config_error);
    att = {};
    att.gain = 1.5;  // the re-preparation gain is pinned to sqrt(2)
    CHECK_THROWS_AS(model::validate(att), config_error);
  }
  SUBCASE("protocol") {
    model::protocol_model p;
    CHECK_NOTHROW(model::validate(p));
    p.v_a = 0.5;
    CHECK_THROWS_AS(model::validate(p), config_error);
    p = {};
    p.v_a = 100.5;
    CHECK_THROWS_AS(model::validate(p), config_error);
    p = {};
    p.beta = 0.0;
    CHECK_THROWS_AS(model::validate(p), config_error);
    p = {};
    p.beta = 1.0;
    CHECK_NOTHROW(model::validate(p));
    p.beta = 1.01;
    CHECK_THROWS_AS(model::validate(p), config_error);
  }
}

TEST_SUITE_END();
