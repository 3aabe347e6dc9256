#include "stencilfab/op_count.hpp"

#include "stencilfab/errors.hpp"

namespace stencilfab {

OpCount hdiff_op_count(int rows, int cols, int depth) {
    if (rows < 4 || cols < 4 || depth < 1)
        fail_parameter("hdiff op count needs rows, cols >= 4 and depth >= 1");
    OpCount oc;
    oc.interior_cells = static_cast<int64_t>(rows - 4) * (cols - 4) * depth;
    oc.macs = 33 * oc.interior_cells;       // 25 Laplacian + 8 flux
    oc.non_mac_ops = 12 * oc.interior_cells; // limiter tests, selects, combines
    return oc;
}

OpCount elementary_op_count(const StencilSpec& spec, int rows, int cols, int depth) {
    if (rows <= 2 * spec.row_halo || cols <= 2 * spec.col_halo || depth < 1)
        fail_parameter("grid too small for stencil '" + spec.name + "'");
    OpCount oc;
    oc.interior_cells = static_cast<int64_t>(rows - 2 * spec.row_halo) *
                        (cols - 2 * spec.col_halo) * depth;
    oc.macs = static_cast<int64_t>(spec.taps.size()) * oc.interior_cells;
    oc.non_mac_ops = 0;
    return oc;
}

} // namespace stencilfab
