#include "hdblind/model.hpp"

#include <cmath>
#include <string>

namespace hdblind::model {

namespace {
constexpr double sqrt2 = 1.4142135623730951;
}

void validate(const detector_model& det) {
  if (!(det.eta > 0.0 && det.eta <= 1.0))
    throw config_error("detector.eta must be in (0,1], got " +
                       std::to_string(det.eta));
  if (!(det.v_ele >= 0.0))
    throw config_error("detector.v_ele must be >= 0");
  if (!(det.t_lo > 0.0 && det.t_lo < 1.0))
    throw config_error("detector.t_lo must be in (0,1)");
  if (!(det.i_lo >= 1.0))
    throw config_error("detector.i_lo must be >= 1");
  if (!(det.f_lo >= 0.0))
    throw config_error("detector.f_lo must be >= 0");
  if (!(det.alpha_lo < det.alpha_hi))
    throw config_error("detector limits must satisfy alpha_lo < alpha_hi");
}

void validate(const channel_model& ch) {
  if (!(ch.length_km >= 0.0))
    throw config_error("channel.length_km must be >= 0");
  if (!(ch.loss_db_per_km > 0.0))
    throw config_error("channel.loss_db_per_km must be > 0");
  if (!(ch.xi_intrinsic >= 0.0))
    throw config_error("channel.xi_intrinsic must be >= 0");
}

void validate(const attack_model& att) {
  if (!(att.r >= 0.0)) throw config_error("attack.r must be >= 0");
  if (!(att.t_ext > 0.0 && att.t_ext < 1.0))
    throw config_error("attack.t_ext must be in (0,1)");
  if (!(att.f_ext >= 0.0)) throw config_error("attack.f_ext must be >= 0");
  if (!(att.xi_tech >= 0.0))
    throw config_error("attack.xi_tech must be >= 0");
  // the re-preparation gain compensates the heterodyne split exactly;
  // anything else breaks the unit-total-gain identity Cov(X_A, X_E) = V_A
  if (std::fabs(att.gain - sqrt2) > 1e-12)
    throw config_error("attack.gain is fixed at sqrt(2)");
}

void validate(const protocol_model& proto) {
  if (!(proto.v_a >= 1.0 && proto.v_a <= 100.0))
    throw config_error("protocol.v_a must be in [1,100], got " +
                       std::to_string(proto.v_a));
  if (!(proto.beta > 0.0 && proto.beta <= 1.0))
    throw config_error("protocol.beta must be in (0,1]");
}

double hd_mean_lo_only(const detector_model& det, double t_port) {
  return det.eta * (1.0 - 2.0 * t_port) * det.i_lo;
}

double hd_variance_lo_only(const detector_model& det, double t_port) {
  const double imb = 1.0 - 2.0 * t_port;
  const double fluct = det.eta * det.eta * imb * imb * det.f_lo * det.f_lo *
                       det.i_lo * det.i_lo;
  const double shot = 4.0 * t_port * (1.0 - t_port) * det.eta * det.i_lo;
  return fluct + shot + det.v_ele;
}

double cmrr_db(double epsilon) {
  if (!(epsilon > 0.0))
    throw config_error("imbalance factor must be > 0 for a CMRR figure");
  return 20.0 * std::log10(2.0 * epsilon);
}

double clip(double x, const detector_model& det) {
  if (x >= det.alpha_hi) return det.alpha_hi;
  if (x <= det.alpha_lo) return det.alpha_lo;
  return x;
}

double external_shot_noise(const attack_model& att,
                           const detector_model& det) {
  (void)det;
  if (!att.active) return 0.0;
  return 4.0 * att.t_ext * (1.0 - att.t_ext) * att.r;
}

double external_fluctuation_noise(const attack_model& att,
                                  const detector_model& det) {
  if (!att.active) return 0.0;
  const double imb = 1.0 - 2.0 * att.t_ext;
  return att.r * att.r * det.eta * att.f_ext * att.f_ext * imb * imb *
         det.i_lo;
}

double external_excess_noise(const attack_model& att,
                             const detector_model& det,
                             const channel_model& ch) {
  const double t = ch.transmission();
  if (!(t > 0.0))
    throw numerical_error("channel transmission is zero; the input-referred "
                          "noise budget diverges");
  return (external_shot_noise(att, det) +
          external_fluctuation_noise(att, det)) /
         t;
}

double external_offset(const attack_model& att, const detector_model& det) {
  if (!att.active) return 0.0;
  return att.r * std::sqrt(det.eta * det.i_lo) * (1.0 - 2.0 * att.t_ext);
}

}  // namespace hdblind::model
