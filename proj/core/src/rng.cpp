#include "hdblind/rng.hpp"

#include <cmath>

namespace hdblind::rng {

namespace {

constexpr uint32_t mult_a = 0xD2511F53u;
constexpr uint32_t mult_b = 0xCD9E8D57u;
constexpr uint32_t weyl_a = 0x9E3779B9u;
constexpr uint32_t weyl_b = 0xBB67AE85u;

inline void philox_round(uint32_t x[4], uint32_t k0, uint32_t k1) {
  const uint64_t p0 = uint64_t(mult_a) * x[0];
  const uint64_t p1 = uint64_t(mult_b) * x[2];
  const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
  const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
  const uint32_t y1 = x[1], y3 = x[3];
  x[0] = hi1 ^ y1 ^ k0;
  x[1] = lo1;
  x[2] = hi0 ^ y3 ^ k1;
  x[3] = lo0;
}

constexpr double two_pi = 6.283185307179586476925286766559;

}  // namespace

philox_out philox4x32(const uint32_t ctr[4], uint32_t k0, uint32_t k1) {
  philox_out out;
  out.x[0] = ctr[0];
  out.x[1] = ctr[1];
  out.x[2] = ctr[2];
  out.x[3] = ctr[3];
  for (int round = 0; round < 10; ++round) {
    philox_round(out.x, k0, k1);
    k0 += weyl_a;
    k1 += weyl_b;
  }
  return out;
}

double uniform01(uint32_t hi, uint32_t lo) {
  const uint64_t bits = (uint64_t(hi) << 32) | lo;
  // 52 bits keep both endpoints exactly representable: a 53-bit mapping
  // rounds the all-ones word to 1.0 under round-to-even.
  return double(bits >> 12) * 0x1.0p-52 + 0x1.0p-53;
}

double normal(uint64_t seed, uint64_t pulse, channel ch) {
  const uint32_t ctr[4] = {uint32_t(pulse), uint32_t(pulse >> 32),
                           static_cast<uint32_t>(ch), 0u};
  const philox_out o =
      philox4x32(ctr, uint32_t(seed), uint32_t(seed >> 32));
  const double u1 = uniform01(o.x[0], o.x[1]);
  const double u2 = uniform01(o.x[2], o.x[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace hdblind::rng
