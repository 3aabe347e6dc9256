// Grid container: layout, accessors, comparison.

#include <cstdint>

#include "doctest.h"
#include "stencilfab/errors.hpp"
#include "stencilfab/grid.hpp"

using namespace stencilfab;

TEST_CASE("grid layout is row-major with depth outermost") {
    Grid3 g(DType::I32, 3, 4, 2);
    CHECK(g.size() == 24);
    // index(r, c, d) = d*R*C + r*C + c
    CHECK(g.index(0, 0, 0) == 0);
    CHECK(g.index(0, 1, 0) == 1);
    CHECK(g.index(1, 0, 0) == 4);
    CHECK(g.index(0, 0, 1) == 12);
    CHECK(g.index(2, 3, 1) == 23);

    int32_t v = 0;
    for (int d = 0; d < 2; ++d)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) g.i32(r, c, d) = v++;
    // the flat payload must be exactly 0..23 in order
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.i32(i) == static_cast<int32_t>(i));
    // row pointers address the same storage
    CHECK(g.i32_row(1, 1)[2] == g.i32(1, 2, 1));
}

TEST_CASE("dtype names round-trip") {
    CHECK(dtype_name(DType::I32) == std::string("i32"));
    CHECK(dtype_name(DType::F32) == std::string("f32"));
    CHECK(dtype_from_name("i32") == DType::I32);
    CHECK(dtype_from_name("f32") == DType::F32);
    CHECK_THROWS_AS(dtype_from_name("f64"), Error);
}

TEST_CASE("grids_equal is exact") {
    Grid3 a(DType::I32, 2, 2, 1);
    Grid3 b(DType::I32, 2, 2, 1);
    CHECK(grids_equal(a, b));
    b.i32(1, 1, 0) = 7;
    CHECK_FALSE(grids_equal(a, b));
    Grid3 c(DType::I32, 2, 2, 2);
    CHECK_FALSE(grids_equal(a, c)); // shape differs
    Grid3 f(DType::F32, 2, 2, 1);
    CHECK_FALSE(grids_equal(a, f)); // dtype differs
}

TEST_CASE("compare_grids: i32 is bitwise") {
    Grid3 a(DType::I32, 2, 3, 1);
    Grid3 b = a;
    b.i32(0, 2, 0) = 1;
    GridDelta d = compare_grids(a, b);
    CHECK_FALSE(d.match);
    CHECK(d.mismatches == 1);
    CHECK(d.first_r == 0);
    CHECK(d.first_c == 2);
    CHECK(d.first_d == 0);
}

TEST_CASE("compare_grids: f32 uses a relative tolerance with floor 1") {
    Grid3 a(DType::F32, 1, 2, 1);
    Grid3 b = a;
    a.f32(0, 0, 0) = 1000.0f;
    b.f32(0, 0, 0) = 1000.005f; // rel error 5e-6 of 1000
    a.f32(0, 1, 0) = 0.0f;
    b.f32(0, 1, 0) = 5e-6f; // absolute floor keeps this a match too
    GridDelta d = compare_grids(a, b, 1e-5);
    CHECK(d.match);
    CHECK(d.max_rel_error > 0.0);
    CHECK(d.max_rel_error <= 1e-5);

    b.f32(0, 1, 0) = 0.1f; // far outside tolerance
    d = compare_grids(a, b, 1e-5);
    CHECK_FALSE(d.match);
    CHECK(d.mismatches == 1);
}

TEST_CASE("compare_grids rejects shape mismatches") {
    Grid3 a(DType::I32, 2, 2, 1);
    Grid3 c(DType::I32, 3, 2, 1);
    CHECK_THROWS_AS(compare_grids(a, c), Error);
}
