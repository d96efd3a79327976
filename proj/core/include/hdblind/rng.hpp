#pragma once

#include <cstdint>

// Counter-based random number generation. Every Gaussian draw is a pure
// function of (seed, pulse index, noise channel id), so Monte Carlo output
// is independent of thread count, partitioning, and evaluation order, and
// two scenarios sharing a channel id see identical noise (common random
// numbers across parameter sweeps).
namespace hdblind::rng {

struct philox_out {
  uint32_t x[4];
};

// Philox4x32-10: 10 rounds, reference multipliers 0xD2511F53/0xCD9E8D57,
// Weyl key increments 0x9E3779B9/0xBB67AE85.
philox_out philox4x32(const uint32_t ctr[4], uint32_t k0, uint32_t k1);

// One independent noise stream per physical noise source.
enum class channel : uint32_t {
  alice_mod = 0,          // Alice's Gaussian modulation
  state_vacuum = 1,       // vacuum of the transmitted coherent state
  eve_bs_vacuum = 2,      // vacuum entering Eve's heterodyne splitter
  eve_reprep_vacuum = 3,  // vacuum of Eve's re-prepared state
  tech_noise = 4,         // technical excess noise source
  channel_vacuum = 5,     // loss-port vacuum of the fiber+detector
  ext_shot = 6,           // external-light shot noise
  ext_jitter = 7,         // external-light intensity jitter
  electronic = 8,         // detector electronic noise
  intrinsic = 9,          // honest-channel excess noise
};

// Uniform on (0,1) from 64 bits: top 52 bits scaled, offset by 2^-53 so
// the endpoints are excluded (log stays finite).
double uniform01(uint32_t hi, uint32_t lo);

// Standard normal draw for (seed, pulse, channel): one Philox block
// {pulse_lo, pulse_hi, channel, 0} keyed by the split seed, mapped through
// the Box-Muller cosine branch. Exactly one normal per (pulse, channel).
double normal(uint64_t seed, uint64_t pulse, channel ch);

}  // namespace hdblind::rng
