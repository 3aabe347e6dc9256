#include "stencilfab/elementary.hpp"

#include <array>

#include "stencilfab/errors.hpp"
#include "stencilfab/fixed_point.hpp"

namespace stencilfab {

namespace {

const std::array<StencilSpec, 5>& stencil_table() {
    static const std::array<StencilSpec, 5> table = {{
        {"jac1d", {{0, -1, 1}, {0, 0, 1}, {0, 1, 1}}, 3, 0, 1},
        {"jac2d3pt", {{-1, 0, 1}, {0, 0, 1}, {1, 0, 1}}, 3, 1, 0},
        {"lap5pt", {{0, 0, 4}, {-1, 0, -1}, {1, 0, -1}, {0, -1, -1}, {0, 1, -1}}, 1, 1, 1},
        {"jac2d5pt", {{0, 0, 1}, {-1, 0, 1}, {1, 0, 1}, {0, -1, 1}, {0, 1, 1}}, 5, 1, 1},
        {"seidel9pt",
         {{-1, -1, 1}, {-1, 0, 1}, {-1, 1, 1}, {0, -1, 1}, {0, 0, 1}, {0, 1, 1},
          {1, -1, 1}, {1, 0, 1}, {1, 1, 1}},
         9, 1, 1},
    }};
    return table;
}

} // namespace

const StencilSpec& stencil_spec(const std::string& name) {
    for (const auto& s : stencil_table())
        if (s.name == name) return s;
    fail_parameter("unknown stencil '" + name + "'");
}

std::vector<std::string> list_stencils() {
    std::vector<std::string> names;
    for (const auto& s : stencil_table()) names.push_back(s.name);
    return names;
}

void elementary_row(const StencilSpec& spec, const int32_t* const psi[3], int C,
                    int32_t* out_row) {
    for (int c = 0; c < spec.col_halo; ++c) {
        out_row[c] = psi[1][c];
        out_row[C - 1 - c] = psi[1][C - 1 - c];
    }
    for (int c = spec.col_halo; c <= C - 1 - spec.col_halo; ++c) {
        int64_t acc = 0;
        for (const Tap& t : spec.taps)
            acc += static_cast<int64_t>(t.num) * psi[1 + t.dr][c + t.dc];
        out_row[c] = saturate32(div_round_half_away(acc, spec.den));
    }
}

void elementary_row(const StencilSpec& spec, const float* const psi[3], int C,
                    float* out_row) {
    for (int c = 0; c < spec.col_halo; ++c) {
        out_row[c] = psi[1][c];
        out_row[C - 1 - c] = psi[1][C - 1 - c];
    }
    const double den = static_cast<double>(spec.den);
    for (int c = spec.col_halo; c <= C - 1 - spec.col_halo; ++c) {
        double acc = 0.0;
        for (const Tap& t : spec.taps)
            acc += static_cast<double>(t.num) * static_cast<double>(psi[1 + t.dr][c + t.dc]);
        out_row[c] = static_cast<float>(acc / den);
    }
}

Grid3 apply_elementary(const Grid3& in, const StencilSpec& spec, int sweeps) {
    if (sweeps < 1) fail_parameter("sweeps must be >= 1");
    if (in.rows() <= 2 * spec.row_halo || in.cols() <= 2 * spec.col_halo)
        fail_parameter("grid too small for stencil '" + spec.name + "'");
    const int R = in.rows(), C = in.cols(), D = in.depth();
    Grid3 cur = in;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        Grid3 next = cur; // untouched rows/cols keep the current values
        for (int d = 0; d < D; ++d) {
            for (int r = spec.row_halo; r <= R - 1 - spec.row_halo; ++r) {
                if (in.dtype() == DType::I32) {
                    const int32_t* psi[3] = {
                        cur.i32_row(spec.row_halo ? r - 1 : r, d), cur.i32_row(r, d),
                        cur.i32_row(spec.row_halo ? r + 1 : r, d)};
                    elementary_row(spec, psi, C, next.i32_row(r, d));
                } else {
                    const float* psi[3] = {
                        cur.f32_row(spec.row_halo ? r - 1 : r, d), cur.f32_row(r, d),
                        cur.f32_row(spec.row_halo ? r + 1 : r, d)};
                    elementary_row(spec, psi, C, next.f32_row(r, d));
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

} // namespace stencilfab
