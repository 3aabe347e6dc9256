#pragma once
/// @file hdiff.hpp
/// @brief Horizontal-diffusion compound stencil: golden reference and the
///        row-stage kernels it shares with the dataflow simulator.
///
/// Semantics, for interior points 2 <= r <= R-3, 2 <= c <= C-3 on every plane:
///
///   L(r,c)   = 4*psi(r,c) - psi(r+1,c) - psi(r-1,c) - psi(r,c+1) - psi(r,c-1)
///   F(r+1/2) = L(r+1,c) - L(r,c)  if (L(r+1,c)-L(r,c)) * (psi(r+1,c)-psi(r,c)) <= 0, else 0
///   G(c+1/2) = analogous along columns
///   out(r,c) = psi(r,c) - C(r,c) * (F(r+1/2) - F(r-1/2) + G(c+1/2) - G(c-1/2))
///
/// The 2-wide halo is copied from the input unchanged. I32 grids accumulate in
/// wide integers and quantize exactly once at the store via srs(acc, shift);
/// F32 grids compute in double and round once at the float store. The output
/// update is evaluated in distributed form
///   psi - ((C*F1 - C*F2) + (C*G1 - C*G2))
/// which is exactly equal for integers and fixes one double rounding order for
/// F32, shared verbatim by the reference and every simulated core role.
///
/// The optional no_limiter mode drops the monotonic flux test (the fluxes are
/// the raw Laplacian differences); everything else is unchanged.

#include <cstdint>
#include <optional>
#include <vector>

#include "stencilfab/fixed_point.hpp"
#include "stencilfab/grid.hpp"

namespace stencilfab {

struct HdiffParams {
    double coeff = 1.0;              ///< scalar diffusion coefficient (integral for I32)
    std::optional<Grid3> coeff_grid; ///< optional per-cell coefficient, same shape/dtype
    int srs_shift = 0;               ///< I32 store shift, [0, 31]; must be 0 for F32
    int sweeps = 1;                  ///< repeated applications
    bool no_limiter = false;         ///< drop the monotonic flux test
};

/// Throws a parameter error unless grid/params satisfy the hdiff contract
/// (R, C >= 5; shift in range and zero for F32; integral scalar coeff for I32;
/// coefficient grid shape/dtype match; sweeps >= 1).
void validate_hdiff_params(const Grid3& grid, const HdiffParams& params);

/// Golden reference. Applies `sweeps` passes; halo copied each pass.
Grid3 hdiff_reference(const Grid3& in, const HdiffParams& params);

// ---------------------------------------------------------------------------
// Point ops (exposed for property tests)
// ---------------------------------------------------------------------------

/// Five-point Laplacian at (r, c, d); requires 1 <= r <= R-2, 1 <= c <= C-2.
/// Exact for both dtypes (integer magnitudes stay far below 2^53).
double laplacian_at(const Grid3& grid, int r, int c, int d);

/// Monotonic flux limiter: returns dlap when dlap*dpsi <= 0, else 0.
/// The I32 form uses an exact sign test (equivalent to the wide product test,
/// and immune to overflow for any 32-bit inputs).
inline int64_t flux_limited(int64_t dlap, int64_t dpsi) {
    bool keep = dlap == 0 || dpsi == 0 || ((dlap < 0) != (dpsi < 0));
    return keep ? dlap : 0;
}
inline double flux_limited(double dlap, double dpsi) {
    return dlap * dpsi <= 0.0 ? dlap : 0.0;
}

// ---------------------------------------------------------------------------
// Row-stage kernels (shared by the reference and the simulator core roles)
// ---------------------------------------------------------------------------
// W = C - 4 interior columns; vector index i corresponds to output col c = i+2.

/// Five Laplacian-result rows for one output row r: the Laplacian field at
/// (r,c), (r-1,c), (r+1,c), (r,c-1), (r,c+1).
template <typename T>
struct LapBundle {
    std::vector<T> cr, crm, crp, cmr, cpr;
    void resize(std::size_t w) {
        cr.resize(w); crm.resize(w); crp.resize(w); cmr.resize(w); cpr.resize(w);
    }
};

/// Scaled flux candidates and keep masks for one output row.
/// q[0]=C*dL(F r+1/2), q[1]=C*dL(F r-1/2), q[2]=C*dL(G c+1/2), q[3]=C*dL(G c-1/2).
template <typename T>
struct FluxBundle {
    std::vector<T> q[4];
    std::vector<uint8_t> keep[4];
    void resize(std::size_t w) {
        for (auto& v : q) v.resize(w);
        for (auto& m : keep) m.assign(w, 1);
    }
};

/// Per-row coefficient view: when row != nullptr the per-cell values are used,
/// otherwise the scalar.
struct CoeffRowI { const int32_t* row = nullptr; int64_t scalar = 1; };
struct CoeffRowF { const float* row = nullptr; double scalar = 1.0; };

/// psi[5] are rows r-2..r+2 of one plane (full width C).
void lap_stage_rows(const int32_t* const psi[5], int C, LapBundle<int64_t>& out);
void lap_stage_rows(const float* const psi[5], int C, LapBundle<double>& out);

/// psi3 are rows r-1, r, r+1.
void flux_mac_rows(const LapBundle<int64_t>& lap, const int32_t* const psi3[3],
                   CoeffRowI coeff, int C, bool no_limiter, FluxBundle<int128>& out);
void flux_mac_rows(const LapBundle<double>& lap, const float* const psi3[3],
                   CoeffRowF coeff, int C, bool no_limiter, FluxBundle<double>& out);

/// Writes the full output row (interior computed, halo columns copied from
/// psi_center). I32 applies srs(acc, shift) at the store.
void flux_nonmac_row(const FluxBundle<int128>& flux, const int32_t* psi_center,
                     int C, int srs_shift, int32_t* out_row);
void flux_nonmac_row(const FluxBundle<double>& flux, const float* psi_center,
                     int C, float* out_row);

/// Composite single-core row kernel: the three stages applied in sequence.
void hdiff_row(const int32_t* const psi[5], CoeffRowI coeff, int C, int srs_shift,
               bool no_limiter, int32_t* out_row);
void hdiff_row(const float* const psi[5], CoeffRowF coeff, int C,
               bool no_limiter, float* out_row);

} // namespace stencilfab
