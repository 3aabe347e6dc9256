#pragma once
/// @file generate.hpp
/// @brief Deterministic input-grid generators and a payload checksum.
///
/// All generators are pure functions of their arguments (the random generator
/// of its 64-bit seed), so every tool and test can reproduce a grid from a
/// one-line description. Randomness uses the SplitMix64 engine.

#include <cstdint>
#include <string>

#include "stencilfab/grid.hpp"

namespace stencilfab {

/// SplitMix64: tiny, fast, well-mixed 64-bit PRNG (public-domain algorithm).
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

/// Every element set to `value` (truncated to int32 for I32 grids).
Grid3 make_constant(DType dtype, int rows, int cols, int depth, double value);

/// Element (r, c, d) = r + c + d.
Grid3 make_ramp(DType dtype, int rows, int cols, int depth);

/// Zero everywhere except `value` at the centre cell (R/2, C/2, D/2).
Grid3 make_impulse(DType dtype, int rows, int cols, int depth, double value);

/// Seeded uniform noise: I32 in [-2^20, 2^20], F32 in [-1, 1).
Grid3 make_random(DType dtype, int rows, int cols, int depth, uint64_t seed);

/// Builds a grid from a pattern name: constant:<v> | ramp | impulse:<v> |
/// random:<seed>. Throws a parameter error for unknown patterns.
Grid3 make_pattern(const std::string& pattern, DType dtype, int rows, int cols, int depth);

/// FNV-1a 64-bit checksum over the grid payload in little-endian byte order
/// (the same bytes the binary container stores).
uint64_t grid_checksum(const Grid3& grid);

} // namespace stencilfab
