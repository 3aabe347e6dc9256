#pragma once
/// @file elementary.hpp
/// @brief Single-stage elementary stencils (table-driven taps).
///
/// Each kernel is an average/difference over a fixed tap set with a rational
/// weight num/den shared by construction:
///
///   name       taps                              den  updated region
///   jac1d      (0,-1) (0,0) (0,+1)                 3  all rows, cols [1, C-2]
///   jac2d3pt   (-1,0) (0,0) (+1,0)                 3  rows [1, R-2], all cols
///   lap5pt     4*(0,0) minus the 4 neighbours      1  rows/cols [1, R-2]/[1, C-2]
///   jac2d5pt   centre + 4 neighbours               5  rows/cols [1, R-2]/[1, C-2]
///   seidel9pt  full 3x3 box (applied out-of-place) 9  rows/cols [1, R-2]/[1, C-2]
///
/// Cells outside the updated region keep the input value. I32 kernels sum
/// num*psi in int64 and store saturate32(round-half-away(acc/den)); F32
/// kernels compute in double and round once at the float store.

#include <cstdint>
#include <string>
#include <vector>

#include "stencilfab/grid.hpp"

namespace stencilfab {

struct Tap {
    int dr, dc;
    int num;
};

struct StencilSpec {
    std::string name;
    std::vector<Tap> taps;
    int den = 1;
    int row_halo = 0; ///< rows [row_halo, R-1-row_halo] are updated
    int col_halo = 0; ///< cols [col_halo, C-1-col_halo] are updated
};

/// Lookup by name; throws a parameter error for unknown names.
const StencilSpec& stencil_spec(const std::string& name);

/// All built-in elementary stencil names, in table order.
std::vector<std::string> list_stencils();

/// Applies `sweeps` out-of-place passes. Requires the grid to be large enough
/// to have at least the halo on each side (rows > 2*row_halo etc.).
Grid3 apply_elementary(const Grid3& in, const StencilSpec& spec, int sweeps = 1);

/// Row kernels shared with the simulator: psi[0..2] are rows r-1, r, r+1 of
/// one plane (psi[0]/psi[2] are only read when spec.row_halo == 1; pass the
/// centre row there for row_halo == 0). Writes the full row, copying cells
/// outside the updated columns.
void elementary_row(const StencilSpec& spec, const int32_t* const psi[3], int C,
                    int32_t* out_row);
void elementary_row(const StencilSpec& spec, const float* const psi[3], int C,
                    float* out_row);

} // namespace stencilfab
