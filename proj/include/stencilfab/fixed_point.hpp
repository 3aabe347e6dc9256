#pragma once
/// @file fixed_point.hpp
/// @brief Fixed-point store semantics: wide accumulation, one shift-round-
///        saturate (srs) applied at the final store.
///
/// I32 kernels accumulate in 64-bit (and 128-bit for the coefficient
/// multiply-accumulate, which cannot overflow there for any 32-bit inputs) and
/// quantize exactly once:
///   srs(acc, s) = saturate32( round_half_away_from_zero(acc / 2^s) )

#include <cstdint>
#include <limits>

#include "stencilfab/errors.hpp"

namespace stencilfab {

using int128 = __int128;

inline int32_t saturate32(int128 v) {
    if (v > std::numeric_limits<int32_t>::max()) return std::numeric_limits<int32_t>::max();
    if (v < std::numeric_limits<int32_t>::min()) return std::numeric_limits<int32_t>::min();
    return static_cast<int32_t>(v);
}

/// Round-half-away-from-zero division by a positive divisor, exact in wide
/// integers. den must be > 0.
inline int64_t div_round_half_away(int64_t num, int64_t den) {
    if (den <= 0) fail_parameter("div_round_half_away: divisor must be positive");
    int128 n = num;
    int128 d = den;
    int128 half = d / 2; // floor(den/2); ties go away from zero via 2*rem >= den
    int128 q = n / d;
    int128 rem = n % d;
    if (rem >= 0) {
        if (2 * rem >= d) ++q;
    } else {
        if (-2 * rem >= d) --q;
    }
    (void)half;
    return static_cast<int64_t>(q);
}

/// Shift-round-saturate: divides by 2^shift with round-half-away-from-zero,
/// then saturates into int32. shift must be in [0, 31].
inline int32_t srs(int128 acc, int shift) {
    if (shift < 0 || shift > 31) fail_parameter("srs: shift must be in [0, 31]");
    if (shift == 0) return saturate32(acc);
    bool neg = acc < 0;
    // magnitude fits: |acc| for any int128 except INT128_MIN, which cannot be
    // produced by 32-bit stencil inputs
    int128 mag = neg ? -acc : acc;
    int128 r = (mag + (int128(1) << (shift - 1))) >> shift;
    return saturate32(neg ? -r : r);
}

inline int32_t srs(int64_t acc, int shift) { return srs(static_cast<int128>(acc), shift); }

} // namespace stencilfab
