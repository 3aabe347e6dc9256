#include "stencilfab/hdiff.hpp"

#include <cmath>
#include <cstring>

#include "stencilfab/errors.hpp"

namespace stencilfab {

void validate_hdiff_params(const Grid3& grid, const HdiffParams& params) {
    if (grid.rows() < 5 || grid.cols() < 5)
        fail_parameter("hdiff needs rows >= 5 and cols >= 5 (got " +
                       std::to_string(grid.rows()) + "x" + std::to_string(grid.cols()) + ")");
    if (params.sweeps < 1) fail_parameter("hdiff sweeps must be >= 1");
    if (params.srs_shift < 0 || params.srs_shift > 31)
        fail_parameter("srs_shift must lie in [0, 31]");
    if (grid.dtype() == DType::F32 && params.srs_shift != 0)
        fail_parameter("srs_shift must be 0 for f32 grids");
    if (grid.dtype() == DType::I32) {
        if (std::trunc(params.coeff) != params.coeff)
            fail_parameter("i32 hdiff requires an integral diffusion coefficient");
        if (std::abs(params.coeff) > 2147483647.0)
            fail_parameter("i32 diffusion coefficient out of 32-bit range");
    }
    if (params.coeff_grid) {
        if (!params.coeff_grid->same_shape(grid) || params.coeff_grid->dtype() != grid.dtype())
            fail_parameter("coefficient grid must match the input grid shape and dtype");
    }
}

// ---------------------------------------------------------------------------
// Laplacian stage
// ---------------------------------------------------------------------------

namespace {

// One Laplacian value from three adjacent rows (up = row above, dn = row below).
inline int64_t lap_point(const int32_t* up, const int32_t* mid, const int32_t* dn, int c) {
    return 4 * static_cast<int64_t>(mid[c]) - static_cast<int64_t>(dn[c]) -
           static_cast<int64_t>(up[c]) - static_cast<int64_t>(mid[c + 1]) -
           static_cast<int64_t>(mid[c - 1]);
}

inline double lap_point(const float* up, const float* mid, const float* dn, int c) {
    return 4.0 * static_cast<double>(mid[c]) - static_cast<double>(dn[c]) -
           static_cast<double>(up[c]) - static_cast<double>(mid[c + 1]) -
           static_cast<double>(mid[c - 1]);
}

template <typename P, typename T>
void lap_stage_rows_impl(const P* const psi[5], int C, LapBundle<T>& out) {
    const int w = C - 4;
    out.resize(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) {
        const int c = i + 2;
        out.cr[i]  = lap_point(psi[1], psi[2], psi[3], c);
        out.crm[i] = lap_point(psi[0], psi[1], psi[2], c);
        out.crp[i] = lap_point(psi[2], psi[3], psi[4], c);
        out.cmr[i] = lap_point(psi[1], psi[2], psi[3], c - 1);
        out.cpr[i] = lap_point(psi[1], psi[2], psi[3], c + 1);
    }
}

} // namespace

void lap_stage_rows(const int32_t* const psi[5], int C, LapBundle<int64_t>& out) {
    lap_stage_rows_impl(psi, C, out);
}
void lap_stage_rows(const float* const psi[5], int C, LapBundle<double>& out) {
    lap_stage_rows_impl(psi, C, out);
}

// ---------------------------------------------------------------------------
// Flux MAC stage: scaled candidates + keep masks
// ---------------------------------------------------------------------------

void flux_mac_rows(const LapBundle<int64_t>& lap, const int32_t* const psi3[3],
                   CoeffRowI coeff, int C, bool no_limiter, FluxBundle<int128>& out) {
    const int w = C - 4;
    out.resize(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) {
        const int c = i + 2;
        const int64_t cf = coeff.row ? static_cast<int64_t>(coeff.row[c]) : coeff.scalar;
        const int64_t dlap[4] = {
            lap.crp[i] - lap.cr[i],  // F at r+1/2
            lap.cr[i] - lap.crm[i],  // F at r-1/2
            lap.cpr[i] - lap.cr[i],  // G at c+1/2
            lap.cr[i] - lap.cmr[i],  // G at c-1/2
        };
        const int64_t dpsi[4] = {
            static_cast<int64_t>(psi3[2][c]) - static_cast<int64_t>(psi3[1][c]),
            static_cast<int64_t>(psi3[1][c]) - static_cast<int64_t>(psi3[0][c]),
            static_cast<int64_t>(psi3[1][c + 1]) - static_cast<int64_t>(psi3[1][c]),
            static_cast<int64_t>(psi3[1][c]) - static_cast<int64_t>(psi3[1][c - 1]),
        };
        for (int k = 0; k < 4; ++k) {
            out.q[k][i] = static_cast<int128>(cf) * dlap[k];
            out.keep[k][i] = no_limiter || dlap[k] == 0 || dpsi[k] == 0 ||
                                     ((dlap[k] < 0) != (dpsi[k] < 0))
                                 ? 1
                                 : 0;
        }
    }
}

void flux_mac_rows(const LapBundle<double>& lap, const float* const psi3[3],
                   CoeffRowF coeff, int C, bool no_limiter, FluxBundle<double>& out) {
    const int w = C - 4;
    out.resize(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) {
        const int c = i + 2;
        const double cf = coeff.row ? static_cast<double>(coeff.row[c]) : coeff.scalar;
        const double dlap[4] = {
            lap.crp[i] - lap.cr[i],
            lap.cr[i] - lap.crm[i],
            lap.cpr[i] - lap.cr[i],
            lap.cr[i] - lap.cmr[i],
        };
        const double dpsi[4] = {
            static_cast<double>(psi3[2][c]) - static_cast<double>(psi3[1][c]),
            static_cast<double>(psi3[1][c]) - static_cast<double>(psi3[0][c]),
            static_cast<double>(psi3[1][c + 1]) - static_cast<double>(psi3[1][c]),
            static_cast<double>(psi3[1][c]) - static_cast<double>(psi3[1][c - 1]),
        };
        for (int k = 0; k < 4; ++k) {
            out.q[k][i] = cf * dlap[k];
            out.keep[k][i] = no_limiter || dlap[k] * dpsi[k] <= 0.0 ? 1 : 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Flux non-MAC stage: combine, quantize, store
// ---------------------------------------------------------------------------

void flux_nonmac_row(const FluxBundle<int128>& flux, const int32_t* psi_center,
                     int C, int srs_shift, int32_t* out_row) {
    const int w = C - 4;
    out_row[0] = psi_center[0];
    out_row[1] = psi_center[1];
    out_row[C - 2] = psi_center[C - 2];
    out_row[C - 1] = psi_center[C - 1];
    for (int i = 0; i < w; ++i) {
        const int c = i + 2;
        const int128 f1 = flux.keep[0][i] ? flux.q[0][i] : 0;
        const int128 f2 = flux.keep[1][i] ? flux.q[1][i] : 0;
        const int128 g1 = flux.keep[2][i] ? flux.q[2][i] : 0;
        const int128 g2 = flux.keep[3][i] ? flux.q[3][i] : 0;
        const int128 acc = static_cast<int128>(psi_center[c]) - ((f1 - f2) + (g1 - g2));
        out_row[c] = srs(acc, srs_shift);
    }
}

void flux_nonmac_row(const FluxBundle<double>& flux, const float* psi_center,
                     int C, float* out_row) {
    const int w = C - 4;
    out_row[0] = psi_center[0];
    out_row[1] = psi_center[1];
    out_row[C - 2] = psi_center[C - 2];
    out_row[C - 1] = psi_center[C - 1];
    for (int i = 0; i < w; ++i) {
        const int c = i + 2;
        const double f1 = flux.keep[0][i] ? flux.q[0][i] : 0.0;
        const double f2 = flux.keep[1][i] ? flux.q[1][i] : 0.0;
        const double g1 = flux.keep[2][i] ? flux.q[2][i] : 0.0;
        const double g2 = flux.keep[3][i] ? flux.q[3][i] : 0.0;
        const double acc = static_cast<double>(psi_center[c]) - ((f1 - f2) + (g1 - g2));
        out_row[c] = static_cast<float>(acc);
    }
}

// ---------------------------------------------------------------------------
// Composite row kernel and reference
// ---------------------------------------------------------------------------

void hdiff_row(const int32_t* const psi[5], CoeffRowI coeff, int C, int srs_shift,
               bool no_limiter, int32_t* out_row) {
    LapBundle<int64_t> lap;
    FluxBundle<int128> flux;
    lap_stage_rows(psi, C, lap);
    const int32_t* psi3[3] = {psi[1], psi[2], psi[3]};
    flux_mac_rows(lap, psi3, coeff, C, no_limiter, flux);
    flux_nonmac_row(flux, psi[2], C, srs_shift, out_row);
}

void hdiff_row(const float* const psi[5], CoeffRowF coeff, int C,
               bool no_limiter, float* out_row) {
    LapBundle<double> lap;
    FluxBundle<double> flux;
    lap_stage_rows(psi, C, lap);
    const float* psi3[3] = {psi[1], psi[2], psi[3]};
    flux_mac_rows(lap, psi3, coeff, C, no_limiter, flux);
    flux_nonmac_row(flux, psi[2], C, out_row);
}

Grid3 hdiff_reference(const Grid3& in, const HdiffParams& params) {
    validate_hdiff_params(in, params);
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 cur = in;
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
        Grid3 next = cur; // halo rows/cols keep the current values
        for (int d = 0; d < D; ++d) {
            for (int r = 2; r <= R - 3; ++r) {
                if (in.dtype() == DType::I32) {
                    const int32_t* psi[5] = {cur.i32_row(r - 2, d), cur.i32_row(r - 1, d),
                                             cur.i32_row(r, d), cur.i32_row(r + 1, d),
                                             cur.i32_row(r + 2, d)};
                    CoeffRowI coeff;
                    coeff.scalar = static_cast<int64_t>(params.coeff);
                    if (params.coeff_grid) coeff.row = params.coeff_grid->i32_row(r, d);
                    hdiff_row(psi, coeff, C, params.srs_shift, params.no_limiter,
                              next.i32_row(r, d));
                } else {
                    const float* psi[5] = {cur.f32_row(r - 2, d), cur.f32_row(r - 1, d),
                                           cur.f32_row(r, d), cur.f32_row(r + 1, d),
                                           cur.f32_row(r + 2, d)};
                    CoeffRowF coeff;
                    coeff.scalar = params.coeff;
                    if (params.coeff_grid) coeff.row = params.coeff_grid->f32_row(r, d);
                    hdiff_row(psi, coeff, C, params.no_limiter, next.f32_row(r, d));
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

double laplacian_at(const Grid3& grid, int r, int c, int d) {
    if (r < 1 || r > grid.rows() - 2 || c < 1 || c > grid.cols() - 2 || d < 0 ||
        d >= grid.depth())
        fail_parameter("laplacian_at point must have all four neighbors in range");
    return 4.0 * grid.as_double(r, c, d) - grid.as_double(r + 1, c, d) -
           grid.as_double(r - 1, c, d) - grid.as_double(r, c + 1, d) -
           grid.as_double(r, c - 1, d);
}

} // namespace stencilfab
