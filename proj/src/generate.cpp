#include "stencilfab/generate.hpp"

#include <cstring>

#include "stencilfab/errors.hpp"

namespace stencilfab {

namespace {

template <typename F>
Grid3 fill_grid(DType dtype, int rows, int cols, int depth, F&& value_at) {
    Grid3 g(dtype, rows, cols, depth);
    for (int d = 0; d < depth; ++d)
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const double v = value_at(r, c, d);
                if (dtype == DType::I32)
                    g.i32(r, c, d) = static_cast<int32_t>(v);
                else
                    g.f32(r, c, d) = static_cast<float>(v);
            }
    return g;
}

} // namespace

Grid3 make_constant(DType dtype, int rows, int cols, int depth, double value) {
    return fill_grid(dtype, rows, cols, depth, [&](int, int, int) { return value; });
}

Grid3 make_ramp(DType dtype, int rows, int cols, int depth) {
    return fill_grid(dtype, rows, cols, depth,
                     [](int r, int c, int d) { return static_cast<double>(r + c + d); });
}

Grid3 make_impulse(DType dtype, int rows, int cols, int depth, double value) {
    const int rc = rows / 2, cc = cols / 2, dc = depth / 2;
    return fill_grid(dtype, rows, cols, depth, [&](int r, int c, int d) {
        return (r == rc && c == cc && d == dc) ? value : 0.0;
    });
}

Grid3 make_random(DType dtype, int rows, int cols, int depth, uint64_t seed) {
    SplitMix64 rng(seed);
    Grid3 g(dtype, rows, cols, depth);
    for (int d = 0; d < depth; ++d)
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                if (dtype == DType::I32) {
                    const int64_t span = (1LL << 21) + 1; // [-2^20, +2^20] inclusive
                    g.i32(r, c, d) =
                        static_cast<int32_t>(static_cast<int64_t>(rng.next() % span) - (1LL << 20));
                } else {
                    g.f32(r, c, d) = static_cast<float>(rng.next_unit() * 2.0 - 1.0);
                }
            }
    return g;
}

Grid3 make_pattern(const std::string& pattern, DType dtype, int rows, int cols, int depth) {
    const auto colon = pattern.find(':');
    const std::string head = pattern.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : pattern.substr(colon + 1);
    try {
        if (head == "constant") return make_constant(dtype, rows, cols, depth, std::stod(arg));
        if (head == "ramp") return make_ramp(dtype, rows, cols, depth);
        if (head == "impulse") return make_impulse(dtype, rows, cols, depth, std::stod(arg));
        if (head == "random") return make_random(dtype, rows, cols, depth, std::stoull(arg));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail_parameter("bad pattern argument in '" + pattern + "'");
    }
    fail_parameter("unknown pattern '" + pattern +
                   "' (expected constant:<v> | ramp | impulse:<v> | random:<seed>)");
}

uint64_t grid_checksum(const Grid3& grid) {
    uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a 64 offset basis
    auto mix = [&h](uint32_t word) {
        for (int b = 0; b < 4; ++b) {
            h ^= (word >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL; // FNV-1a 64 prime
        }
    };
    const int R = grid.rows(), C = grid.cols(), D = grid.depth();
    for (int d = 0; d < D; ++d)
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) {
                uint32_t word;
                if (grid.dtype() == DType::I32) {
                    const int32_t v = grid.i32(r, c, d);
                    std::memcpy(&word, &v, 4);
                } else {
                    const float v = grid.f32(r, c, d);
                    std::memcpy(&word, &v, 4);
                }
                mix(word);
            }
    return h;
}

} // namespace stencilfab
