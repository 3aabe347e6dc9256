#pragma once
// Independent straight-loop reference implementations for the test suite.
//
// Everything here is written from the kernel definitions directly, on
// purpose sharing no code with the library: plain nested loops, the factored
// update form psi - C*(F1 - F2 + G3 - G4) instead of the library's
// distributed per-flux scaling, and locally reimplemented rounding helpers.
// In integer arithmetic the two forms are exactly equal, so I32 comparisons
// are bitwise; in floating point they differ only by rounding order, well
// inside the 1e-5 comparison tolerance.

#include <cstdint>
#include <string>

#include "stencilfab/grid.hpp"

namespace oracle {

using stencilfab::DType;
using stencilfab::Grid3;

// --- local rounding helpers (independent of the library's fixed_point.hpp) ---

inline int32_t sat32(__int128 v) {
    if (v > 2147483647) return 2147483647;
    if (v < -2147483647 - 1) return -2147483647 - 1;
    return static_cast<int32_t>(v);
}

// Arithmetic right shift with round-half-away-from-zero, then saturate.
inline int32_t shift_round_sat(__int128 acc, int shift) {
    if (shift == 0) return sat32(acc);
    const bool neg = acc < 0;
    __int128 mag = neg ? -acc : acc;
    const __int128 r = (mag + (static_cast<__int128>(1) << (shift - 1))) >> shift;
    return sat32(neg ? -r : r);
}

// Divide with round-half-away-from-zero, then saturate.
inline int32_t div_round_sat(int64_t num, int64_t den) {
    int64_t q = num / den;
    const int64_t rem = num % den;
    if (rem != 0 && 2 * (rem < 0 ? -rem : rem) >= den) q += num < 0 ? -1 : 1;
    return sat32(q);
}

// --- horizontal diffusion, integer path ---

inline Grid3 hdiff_i32(const Grid3& in, int64_t coeff, int shift, bool no_limiter,
                       int sweeps = 1, const Grid3* coeff_grid = nullptr) {
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 cur = in;
    for (int s = 0; s < sweeps; ++s) {
        Grid3 out = cur;
        for (int d = 0; d < D; ++d) {
            auto psi = [&](int r, int c) -> int64_t { return cur.i32(r, c, d); };
            auto lap = [&](int r, int c) -> int64_t {
                return 4 * psi(r, c) - psi(r + 1, c) - psi(r - 1, c) - psi(r, c + 1) -
                       psi(r, c - 1);
            };
            // A flux candidate survives unless it runs up the psi gradient.
            auto flux = [&](int64_t dlap, int64_t dpsi) -> int64_t {
                if (no_limiter) return dlap;
                return static_cast<__int128>(dlap) * dpsi <= 0 ? dlap : 0;
            };
            for (int r = 2; r <= R - 3; ++r)
                for (int c = 2; c <= C - 3; ++c) {
                    const int64_t f1 = flux(lap(r + 1, c) - lap(r, c), psi(r + 1, c) - psi(r, c));
                    const int64_t f2 = flux(lap(r, c) - lap(r - 1, c), psi(r, c) - psi(r - 1, c));
                    const int64_t g1 = flux(lap(r, c + 1) - lap(r, c), psi(r, c + 1) - psi(r, c));
                    const int64_t g2 = flux(lap(r, c) - lap(r, c - 1), psi(r, c) - psi(r, c - 1));
                    const int64_t cf = coeff_grid ? coeff_grid->i32(r, c, d) : coeff;
                    const __int128 acc =
                        static_cast<__int128>(psi(r, c)) -
                        static_cast<__int128>(cf) * ((f1 - f2) + (g1 - g2));
                    out.i32(r, c, d) = shift_round_sat(acc, shift);
                }
        }
        cur = out;
    }
    return cur;
}

// --- horizontal diffusion, floating-point path ---

inline Grid3 hdiff_f32(const Grid3& in, double coeff, bool no_limiter, int sweeps = 1,
                       const Grid3* coeff_grid = nullptr) {
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 cur = in;
    for (int s = 0; s < sweeps; ++s) {
        Grid3 out = cur;
        for (int d = 0; d < D; ++d) {
            auto psi = [&](int r, int c) -> double { return cur.f32(r, c, d); };
            auto lap = [&](int r, int c) -> double {
                return 4.0 * psi(r, c) - psi(r + 1, c) - psi(r - 1, c) - psi(r, c + 1) -
                       psi(r, c - 1);
            };
            auto flux = [&](double dlap, double dpsi) -> double {
                if (no_limiter) return dlap;
                return dlap * dpsi <= 0.0 ? dlap : 0.0;
            };
            for (int r = 2; r <= R - 3; ++r)
                for (int c = 2; c <= C - 3; ++c) {
                    const double f1 = flux(lap(r + 1, c) - lap(r, c), psi(r + 1, c) - psi(r, c));
                    const double f2 = flux(lap(r, c) - lap(r - 1, c), psi(r, c) - psi(r - 1, c));
                    const double g1 = flux(lap(r, c + 1) - lap(r, c), psi(r, c + 1) - psi(r, c));
                    const double g2 = flux(lap(r, c) - lap(r, c - 1), psi(r, c) - psi(r, c - 1));
                    const double cf = coeff_grid ? coeff_grid->f32(r, c, d) : coeff;
                    out.f32(r, c, d) =
                        static_cast<float>(psi(r, c) - cf * ((f1 - f2) + (g1 - g2)));
                }
        }
        cur = out;
    }
    return cur;
}

// --- elementary stencils, one straight-loop function each ---

inline Grid3 jac1d(const Grid3& in) {
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 out = in;
    for (int d = 0; d < D; ++d)
        for (int r = 0; r < R; ++r)
            for (int c = 1; c <= C - 2; ++c) {
                if (in.dtype() == DType::I32) {
                    const int64_t acc = static_cast<int64_t>(in.i32(r, c - 1, d)) +
                                        in.i32(r, c, d) + in.i32(r, c + 1, d);
                    out.i32(r, c, d) = div_round_sat(acc, 3);
                } else {
                    const double acc = static_cast<double>(in.f32(r, c - 1, d)) +
                                       in.f32(r, c, d) + in.f32(r, c + 1, d);
                    out.f32(r, c, d) = static_cast<float>(acc / 3.0);
                }
            }
    return out;
}

inline Grid3 jac2d3pt(const Grid3& in) {
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 out = in;
    for (int d = 0; d < D; ++d)
        for (int r = 1; r <= R - 2; ++r)
            for (int c = 0; c < C; ++c) {
                if (in.dtype() == DType::I32) {
                    const int64_t acc = static_cast<int64_t>(in.i32(r - 1, c, d)) +
                                        in.i32(r, c, d) + in.i32(r + 1, c, d);
                    out.i32(r, c, d) = div_round_sat(acc, 3);
                } else {
                    const double acc = static_cast<double>(in.f32(r - 1, c, d)) +
                                       in.f32(r, c, d) + in.f32(r + 1, c, d);
                    out.f32(r, c, d) = static_cast<float>(acc / 3.0);
                }
            }
    return out;
}

inline Grid3 lap5pt(const Grid3& in) {
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 out = in;
    for (int d = 0; d < D; ++d)
        for (int r = 1; r <= R - 2; ++r)
            for (int c = 1; c <= C - 2; ++c) {
                if (in.dtype() == DType::I32) {
                    const int64_t acc = 4 * static_cast<int64_t>(in.i32(r, c, d)) -
                                        in.i32(r - 1, c, d) - in.i32(r + 1, c, d) -
                                        in.i32(r, c - 1, d) - in.i32(r, c + 1, d);
                    out.i32(r, c, d) = div_round_sat(acc, 1);
                } else {
                    const double acc = 4.0 * static_cast<double>(in.f32(r, c, d)) -
                                       in.f32(r - 1, c, d) - in.f32(r + 1, c, d) -
                                       in.f32(r, c - 1, d) - in.f32(r, c + 1, d);
                    out.f32(r, c, d) = static_cast<float>(acc);
                }
            }
    return out;
}

inline Grid3 jac2d5pt(const Grid3& in) {
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 out = in;
    for (int d = 0; d < D; ++d)
        for (int r = 1; r <= R - 2; ++r)
            for (int c = 1; c <= C - 2; ++c) {
                if (in.dtype() == DType::I32) {
                    const int64_t acc = static_cast<int64_t>(in.i32(r, c, d)) +
                                        in.i32(r - 1, c, d) + in.i32(r + 1, c, d) +
                                        in.i32(r, c - 1, d) + in.i32(r, c + 1, d);
                    out.i32(r, c, d) = div_round_sat(acc, 5);
                } else {
                    const double acc = static_cast<double>(in.f32(r, c, d)) +
                                       in.f32(r - 1, c, d) + in.f32(r + 1, c, d) +
                                       in.f32(r, c - 1, d) + in.f32(r, c + 1, d);
                    out.f32(r, c, d) = static_cast<float>(acc / 5.0);
                }
            }
    return out;
}

inline Grid3 seidel9pt(const Grid3& in) {
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 out = in;
    for (int d = 0; d < D; ++d)
        for (int r = 1; r <= R - 2; ++r)
            for (int c = 1; c <= C - 2; ++c) {
                if (in.dtype() == DType::I32) {
                    int64_t acc = 0;
                    for (int dr = -1; dr <= 1; ++dr)
                        for (int dc = -1; dc <= 1; ++dc) acc += in.i32(r + dr, c + dc, d);
                    out.i32(r, c, d) = div_round_sat(acc, 9);
                } else {
                    double acc = 0.0;
                    for (int dr = -1; dr <= 1; ++dr)
                        for (int dc = -1; dc <= 1; ++dc) acc += in.f32(r + dr, c + dc, d);
                    out.f32(r, c, d) = static_cast<float>(acc / 9.0);
                }
            }
    return out;
}

inline Grid3 elementary(const std::string& name, const Grid3& in, int sweeps = 1) {
    Grid3 cur = in;
    for (int s = 0; s < sweeps; ++s) {
        if (name == "jac1d")
            cur = jac1d(cur);
        else if (name == "jac2d3pt")
            cur = jac2d3pt(cur);
        else if (name == "lap5pt")
            cur = lap5pt(cur);
        else if (name == "jac2d5pt")
            cur = jac2d5pt(cur);
        else
            cur = seidel9pt(cur);
    }
    return cur;
}

} // namespace oracle
