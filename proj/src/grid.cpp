#include "stencilfab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace stencilfab {

const char* dtype_name(DType t) {
    return t == DType::I32 ? "i32" : "f32";
}

DType dtype_from_name(const std::string& name) {
    if (name == "i32" || name == "I32") return DType::I32;
    if (name == "f32" || name == "F32") return DType::F32;
    fail_parameter("unknown dtype '" + name + "' (expected i32 or f32)");
}

Grid3::Grid3(DType dtype, int rows, int cols, int depth)
    : dtype_(dtype), rows_(rows), cols_(cols), depth_(depth) {
    if (rows < 1 || cols < 1 || depth < 1)
        fail_parameter("grid dims must be >= 1, got " + std::to_string(rows) + "x" +
                       std::to_string(cols) + "x" + std::to_string(depth));
    if (dtype_ == DType::I32)
        vi_.assign(size(), 0);
    else
        vf_.assign(size(), 0.0f);
}

bool grids_equal(const Grid3& a, const Grid3& b) {
    if (!a.same_shape(b)) return false;
    if (a.dtype() == DType::I32) return a.i32_data() == b.i32_data();
    // bitwise for floats too: compare storage, not arithmetic values
    const auto& x = a.f32_data();
    const auto& y = b.f32_data();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::memcmp(&x[i], &y[i], sizeof(float)) != 0) return false;
    }
    return true;
}

GridDelta compare_grids(const Grid3& a, const Grid3& b, double f32_tol) {
    if (!a.same_shape(b))
        fail_parameter("compare_grids: shape or dtype mismatch");
    GridDelta delta;
    for (int d = 0; d < a.depth(); ++d) {
        for (int r = 0; r < a.rows(); ++r) {
            for (int c = 0; c < a.cols(); ++c) {
                bool ok;
                if (a.dtype() == DType::I32) {
                    ok = a.i32_at(r, c, d) == b.i32_at(r, c, d);
                } else {
                    double x = a.f32_at(r, c, d), y = b.f32_at(r, c, d);
                    double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
                    double rel = std::fabs(x - y) / scale;
                    delta.max_rel_error = std::max(delta.max_rel_error, rel);
                    ok = rel <= f32_tol;
                }
                if (!ok) {
                    if (delta.mismatches == 0) {
                        delta.first_r = r;
                        delta.first_c = c;
                        delta.first_d = d;
                    }
                    ++delta.mismatches;
                }
            }
        }
    }
    delta.match = delta.mismatches == 0;
    return delta;
}

} // namespace stencilfab
