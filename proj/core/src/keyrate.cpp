#include "hdblind/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdblind/errors.hpp"

namespace hdblind::keyrate {

double g_entropy(double x) {
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

namespace {

constexpr double lambda_tol = 1e-9;

// symplectic eigenvalue from its squared value; tiny negative discriminant
// leftovers are numerical dust
double lam_from_sq(double sq, const char* which) {
  if (sq < 0.0) {
    if (sq > -1e-9) sq = 0.0;
  }
  const double l = std::sqrt(std::max(sq, 0.0));
  if (l < 1.0 - lambda_tol)
    throw numerical_error(std::string("symplectic eigenvalue ") + which +
                          " below 1: unphysical covariance input");
  return std::max(l, 1.0);
}

}  // namespace

key_rate_report key_rate(const model::protocol_model& proto, double t,
                         double xi, const model::detector_model& det) {
  if (!(t > 0.0 && t <= 1.0))
    throw config_error("key rate needs transmission in (0,1]");
  if (!(xi >= 0.0)) throw config_error("key rate needs xi >= 0");
  model::validate(proto);

  const double v = proto.v_a + 1.0;
  const double chi_line = 1.0 / t - 1.0 + xi;
  const double chi_hom = (1.0 - det.eta + det.v_ele) / det.eta;
  const double chi_tot = chi_line + chi_hom / t;

  const double i_ab =
      0.5 * std::log2((v + chi_tot) / (1.0 + chi_tot));

  const double a_term = v * v * (1.0 - 2.0 * t) + 2.0 * t +
                        t * t * (v + chi_line) * (v + chi_line);
  const double b_term = t * t * (v * chi_line + 1.0) * (v * chi_line + 1.0);
  const double disc1 = a_term * a_term - 4.0 * b_term;
  const double sq1 = std::sqrt(std::max(disc1, 0.0));
  const double l1 = lam_from_sq(0.5 * (a_term + sq1), "1");
  const double l2 = lam_from_sq(0.5 * (a_term - sq1), "2");

  const double sb = std::sqrt(b_term);
  const double denom = t * (v + chi_tot);
  const double c_term =
      (a_term * chi_hom + v * sb + t * (v + chi_line)) / denom;
  const double d_term = sb * (v + sb * chi_hom) / denom;
  const double disc2 = c_term * c_term - 4.0 * d_term;
  const double sq2 = std::sqrt(std::max(disc2, 0.0));
  const double l3 = lam_from_sq(0.5 * (c_term + sq2), "3");
  const double l4 = lam_from_sq(0.5 * (c_term - sq2), "4");

  key_rate_report rep;
  rep.v_a_used = proto.v_a;
  rep.i_ab = i_ab;
  rep.chi_be = g_entropy((l1 - 1.0) / 2.0) + g_entropy((l2 - 1.0) / 2.0) -
               g_entropy((l3 - 1.0) / 2.0) - g_entropy((l4 - 1.0) / 2.0);
  rep.k = proto.beta * i_ab - rep.chi_be;
  return rep;
}

xi_null_result xi_null(const model::protocol_model& proto, double t,
                       const model::detector_model& det) {
  const double k0 = key_rate(proto, t, 0.0, det).k;
  if (k0 <= 0.0) return {0.0, true};

  constexpr double xi_hi = 5.0;
  double lo = 0.0, hi = xi_hi;
  double k_lo = k0;
  const double k_hi = key_rate(proto, t, xi_hi, det).k;
  if (!(k_hi < 0.0))
    throw numerical_error("no sign change of the key rate on the bracket");
  // monotonicity spot-check across the bracket
  double prev = k0;
  for (int i = 1; i <= 5; ++i) {
    const double k_i = key_rate(proto, t, xi_hi * double(i) / 5.0, det).k;
    if (!(k_i < prev))
      throw numerical_error("key rate is not decreasing across the bracket");
    prev = k_i;
  }
  // drive the interval far below the 1e-6 contract so the root's residual
  // is below 1e-8 bits/pulse
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    const double k_mid = key_rate(proto, t, mid, det).k;
    if (k_mid > 0.0) {
      lo = mid;
      k_lo = k_mid;
    } else {
      hi = mid;
    }
  }
  (void)k_lo;
  return {0.5 * (lo + hi), false};
}

optimize_va_result optimize_va(double t, const model::detector_model& det,
                               double xi_assumed, double beta) {
  constexpr int grid_n = 100;
  constexpr double va_min = 1.0, va_max = 100.0;
  double grid_k[grid_n];
  model::protocol_model proto;
  proto.beta = beta;
  for (int i = 0; i < grid_n; ++i) {
    proto.v_a = va_min + (va_max - va_min) * double(i) / double(grid_n - 1);
    grid_k[i] = key_rate(proto, t, xi_assumed, det).k;
  }
  int best = 0;
  for (int i = 1; i < grid_n; ++i)
    if (grid_k[i] > grid_k[best]) best = i;  // ties keep the smallest V_A

  const double grid_va =
      va_min + (va_max - va_min) * double(best) / double(grid_n - 1);
  if (grid_k[best] <= 0.0) return {grid_va, grid_k[best], true};

  // unimodality of the scan: nondecreasing up to the argmax, nonincreasing
  // after; anything else (including plateaus) falls back to the grid argmax
  bool unimodal = true;
  for (int i = 1; i <= best; ++i)
    if (!(grid_k[i] > grid_k[i - 1])) unimodal = false;
  for (int i = best + 1; i < grid_n; ++i)
    if (!(grid_k[i] < grid_k[i - 1])) unimodal = false;
  if (!unimodal) return {grid_va, grid_k[best], false};

  double a = (best > 0) ? grid_va - (va_max - va_min) / double(grid_n - 1)
                        : va_min;
  double b = (best < grid_n - 1)
                 ? grid_va + (va_max - va_min) / double(grid_n - 1)
                 : va_max;
  const double inv_phi = 0.6180339887498949;
  auto eval = [&](double va) {
    proto.v_a = va;
    return key_rate(proto, t, xi_assumed, det).k;
  };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double kc = eval(c), kd = eval(d);
  while (b - a > 1e-10) {
    if (kc >= kd) {
      b = d;
      d = c;
      kd = kc;
      c = b - inv_phi * (b - a);
      kc = eval(c);
    } else {
      a = c;
      c = d;
      kc = kd;
      d = a + inv_phi * (b - a);
      kd = eval(d);
    }
  }
  double va_opt = 0.5 * (a + b);
  double k_opt = eval(va_opt);
  // never return a point the coarse grid beats
  if (k_opt < grid_k[best]) {
    va_opt = grid_va;
    k_opt = grid_k[best];
  }
  va_opt = std::clamp(va_opt, va_min, va_max);
  return {va_opt, k_opt, false};
}

}  // namespace hdblind::keyrate
