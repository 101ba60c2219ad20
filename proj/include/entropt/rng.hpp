#pragma once

#include <cstdint>

namespace entropt::rng {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block of
/// four 32-bit words is produced from a 128-bit counter and a 64-bit key by
/// ten bijective rounds; there is no sequential state, so any (counter, key)
/// pair can be evaluated independently and in any order.
struct PhiloxBlock {
    uint32_t v[4];
};

PhiloxBlock philox4x32(uint64_t counter_lo, uint64_t counter_hi, uint64_t key);

/// Uniform deviate in the open interval (0, 1) built from 53 random bits.
double uniform_open(const PhiloxBlock& block);

/// Inverse of the standard normal CDF (Wichura's AS241, double precision).
/// Maximum absolute error is far below 1e-9 across (0, 1).
double normal_quantile(double p);

/// One standard normal deviate for the stream position (seed, path, step).
/// Deterministic and independent of evaluation order.
inline double standard_normal(uint64_t seed, uint64_t path, uint64_t step) {
    return normal_quantile(uniform_open(philox4x32(step, path, seed)));
}

}  // namespace entropt::rng
