#pragma once
/// @file op_count.hpp
/// @brief Work accounting for the stencil kernels.
///
/// Counts are per full grid pass. A MAC is one multiply-accumulate and is
/// worth two arithmetic operations in the totals; non-MAC ops (compares,
/// selects, adds outside the accumulators) are worth one.
///
/// Horizontal diffusion, per interior cell: 25 Laplacian MACs + 8 flux MACs
/// = 33 MACs, plus 12 non-MAC ops (4 limiter tests, 4 selects, 4 combines).
/// Elementary stencils: one MAC per tap per updated cell, no non-MAC ops.

#include <cstdint>

#include "stencilfab/elementary.hpp"

namespace stencilfab {

struct OpCount {
    int64_t interior_cells = 0; ///< cells actually updated
    int64_t macs = 0;
    int64_t non_mac_ops = 0;
    int64_t total_ops() const { return 2 * macs + non_mac_ops; }
};

/// Horizontal-diffusion counts; interior is (rows-4)*(cols-4)*depth, which is
/// zero (legal) at rows or cols == 4 and a parameter error below that.
OpCount hdiff_op_count(int rows, int cols, int depth);

/// Elementary-stencil counts; the updated region depends on the tap halo.
OpCount elementary_op_count(const StencilSpec& spec, int rows, int cols, int depth);

} // namespace stencilfab
