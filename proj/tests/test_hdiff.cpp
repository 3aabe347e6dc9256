// Horizontal-diffusion golden semantics, checked against the independent
// straight-loop oracle in tests/support/oracle.hpp and against hand-computed
// frozen values.

#include <cstdint>
#include <vector>

#include "doctest.h"
#include "stencilfab/errors.hpp"
#include "stencilfab/generate.hpp"
#include "stencilfab/hdiff.hpp"
#include "support/oracle.hpp"

using namespace stencilfab;

TEST_CASE("frozen impulse response, i32, coeff 1, shift 0") {
    // A unit impulse at the centre of a 7x7 plane. Expected interior values
    // were computed by hand from the definition (Laplacian of the impulse,
    // flux differences, limiter): rows/cols 2..4 are
    //     2 -3  2
    //    -3  1 -3
    //     2 -3  2
    // and every other cell keeps its input value (zero).
    Grid3 in = make_impulse(DType::I32, 7, 7, 1, 1);
    HdiffParams p;
    Grid3 out = hdiff_reference(in, p);
    const int32_t expect[3][3] = {{2, -3, 2}, {-3, 1, -3}, {2, -3, 2}};
    for (int r = 0; r < 7; ++r)
        for (int c = 0; c < 7; ++c) {
            if (r >= 2 && r <= 4 && c >= 2 && c <= 4)
                CHECK(out.i32(r, c, 0) == expect[r - 2][c - 2]);
            else
                CHECK(out.i32(r, c, 0) == 0);
        }
    // the oracle reproduces the same plane
    CHECK(grids_equal(out, oracle::hdiff_i32(in, 1, 0, false)));
}

TEST_CASE("frozen impulse response with coeff 2 and srs shift 1 matches shift-0 plane") {
    // acc = psi - 2*X and a 1-bit round-half-away shift recover exactly the
    // coeff-1 result for this input (all interior accumulators are even
    // multiples except the centre, where srs(1, 1) = round(0.5) = 1).
    Grid3 in = make_impulse(DType::I32, 7, 7, 1, 1);
    HdiffParams p1;
    HdiffParams p2;
    p2.coeff = 2.0;
    p2.srs_shift = 1;
    CHECK(grids_equal(hdiff_reference(in, p1), hdiff_reference(in, p2)));
}

TEST_CASE("ramp and constant fields are invariant") {
    // psi = r + c + d is harmonic for the 5-point Laplacian, so every flux is
    // zero and the field passes through unchanged; constants likewise.
    HdiffParams p;
    p.coeff = 3.0;
    for (DType dt : {DType::I32, DType::F32}) {
        Grid3 ramp = make_ramp(dt, 9, 8, 2);
        CHECK(grids_equal(hdiff_reference(ramp, p), ramp));
        Grid3 cst = make_constant(dt, 7, 7, 2, 41);
        CHECK(grids_equal(hdiff_reference(cst, p), cst));
    }
}

TEST_CASE("i32 reference matches the oracle bitwise on random grids") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int R = 5 + static_cast<int>(rng.next() % 20);
        const int C = 5 + static_cast<int>(rng.next() % 20);
        const int D = 1 + static_cast<int>(rng.next() % 3);
        const int64_t coeff = 1 + static_cast<int64_t>(rng.next() % 8);
        const int shift = static_cast<int>(rng.next() % 7);
        const bool no_limiter = (rng.next() & 1) != 0;
        Grid3 in = make_random(DType::I32, R, C, D, rng.next());
        HdiffParams p;
        p.coeff = static_cast<double>(coeff);
        p.srs_shift = shift;
        p.no_limiter = no_limiter;
        Grid3 got = hdiff_reference(in, p);
        Grid3 want = oracle::hdiff_i32(in, coeff, shift, no_limiter);
        CHECK(grids_equal(got, want));
    }
}

TEST_CASE("f32 reference matches the oracle within 1e-5") {
    SplitMix64 rng(2025);
    for (int trial = 0; trial < 40; ++trial) {
        const int R = 5 + static_cast<int>(rng.next() % 20);
        const int C = 5 + static_cast<int>(rng.next() % 20);
        const int D = 1 + static_cast<int>(rng.next() % 3);
        const double coeff = 0.1 + 1.9 * rng.next_unit();
        const bool no_limiter = (rng.next() & 1) != 0;
        Grid3 in = make_random(DType::F32, R, C, D, rng.next());
        HdiffParams p;
        p.coeff = coeff;
        p.no_limiter = no_limiter;
        Grid3 got = hdiff_reference(in, p);
        Grid3 want = oracle::hdiff_f32(in, coeff, no_limiter);
        CHECK(compare_grids(got, want, 1e-5).match);
    }
}

TEST_CASE("per-cell coefficient grids match the oracle") {
    SplitMix64 rng(77);
    Grid3 in = make_random(DType::I32, 11, 9, 2, 4242);
    Grid3 cg(DType::I32, 11, 9, 2);
    for (std::size_t i = 0; i < cg.size(); ++i)
        cg.i32(i) = static_cast<int32_t>(rng.next() % 5);
    HdiffParams p;
    p.coeff_grid = cg;
    p.srs_shift = 2;
    Grid3 got = hdiff_reference(in, p);
    Grid3 want = oracle::hdiff_i32(in, 1, 2, false, 1, &cg);
    CHECK(grids_equal(got, want));

    Grid3 inf = make_random(DType::F32, 11, 9, 2, 4243);
    Grid3 cgf(DType::F32, 11, 9, 2);
    for (std::size_t i = 0; i < cgf.size(); ++i)
        cgf.f32(i) = static_cast<float>(rng.next_unit());
    HdiffParams pf;
    pf.coeff_grid = cgf;
    Grid3 gotf = hdiff_reference(inf, pf);
    Grid3 wantf = oracle::hdiff_f32(inf, 1.0, false, 1, &cgf);
    CHECK(compare_grids(gotf, wantf, 1e-5).match);
}

TEST_CASE("multi-sweep application matches the oracle") {
    Grid3 in = make_random(DType::I32, 12, 12, 1, 31);
    HdiffParams p;
    p.sweeps = 3;
    CHECK(grids_equal(hdiff_reference(in, p), oracle::hdiff_i32(in, 1, 0, false, 3)));

    Grid3 inf = make_random(DType::F32, 12, 12, 1, 32);
    HdiffParams pf;
    pf.sweeps = 3;
    pf.coeff = 0.25;
    CHECK(compare_grids(hdiff_reference(inf, pf), oracle::hdiff_f32(inf, 0.25, false, 3), 1e-5)
              .match);
}

TEST_CASE("the 2-wide halo always keeps input values") {
    Grid3 in = make_random(DType::I32, 10, 13, 2, 88);
    HdiffParams p;
    p.coeff = 4.0;
    Grid3 out = hdiff_reference(in, p);
    for (int d = 0; d < 2; ++d)
        for (int r = 0; r < 10; ++r)
            for (int c = 0; c < 13; ++c) {
                const bool interior = r >= 2 && r <= 7 && c >= 2 && c <= 10;
                if (!interior) CHECK(out.i32(r, c, d) == in.i32(r, c, d));
            }
}

TEST_CASE("flux_limited implements the exact sign test") {
    SplitMix64 rng(123);
    for (int trial = 0; trial < 2000; ++trial) {
        // include genuinely huge values: the sign test must not overflow
        const int64_t dlap = static_cast<int64_t>(rng.next()) >> (rng.next() % 32);
        const int64_t dpsi = static_cast<int64_t>(rng.next()) >> (rng.next() % 32);
        const int64_t want = static_cast<__int128>(dlap) * dpsi <= 0 ? dlap : 0;
        CHECK(flux_limited(dlap, dpsi) == want);
    }
    CHECK(flux_limited(int64_t{0}, int64_t{5}) == 0);
    CHECK(flux_limited(int64_t{5}, int64_t{0}) == 5);
    CHECK(flux_limited(int64_t{-5}, int64_t{3}) == -5);
    CHECK(flux_limited(int64_t{5}, int64_t{3}) == 0);
    CHECK(flux_limited(2.0, -1.0) == 2.0);
    CHECK(flux_limited(2.0, 1.0) == 0.0);
    CHECK(flux_limited(-2.0, 0.0) == -2.0);
}

TEST_CASE("laplacian_at matches a straight-loop recomputation") {
    Grid3 g = make_random(DType::I32, 8, 8, 2, 55);
    for (int d = 0; d < 2; ++d)
        for (int r = 1; r <= 6; ++r)
            for (int c = 1; c <= 6; ++c) {
                const double want = 4.0 * g.i32(r, c, d) - g.i32(r + 1, c, d) -
                                    g.i32(r - 1, c, d) - g.i32(r, c + 1, d) -
                                    g.i32(r, c - 1, d);
                CHECK(laplacian_at(g, r, c, d) == want);
            }
}

TEST_CASE("no_limiter keeps all flux candidates") {
    // with the limiter off the update is a pure linear operator; verify
    // against the oracle and check it actually differs from the limited run
    Grid3 in = make_random(DType::I32, 9, 9, 1, 321);
    HdiffParams off;
    off.no_limiter = true;
    Grid3 got = hdiff_reference(in, off);
    CHECK(grids_equal(got, oracle::hdiff_i32(in, 1, 0, true)));
    HdiffParams on;
    CHECK_FALSE(grids_equal(got, hdiff_reference(in, on)));
}

TEST_CASE("row kernel composition equals the whole-grid reference") {
    Grid3 in = make_random(DType::I32, 9, 11, 1, 999);
    HdiffParams p;
    p.coeff = 2.0;
    p.srs_shift = 1;
    Grid3 want = hdiff_reference(in, p);
    const int C = in.cols();
    CoeffRowI coeff;
    coeff.scalar = 2;
    for (int r = 2; r <= in.rows() - 3; ++r) {
        const int32_t* rows5[5] = {in.i32_row(r - 2, 0), in.i32_row(r - 1, 0), in.i32_row(r, 0),
                                   in.i32_row(r + 1, 0), in.i32_row(r + 2, 0)};
        std::vector<int32_t> out_row(C);
        hdiff_row(rows5, coeff, C, p.srs_shift, false, out_row.data());
        for (int c = 0; c < C; ++c) CHECK(out_row[c] == want.i32(r, c, 0));
    }
}

TEST_CASE("staged row kernels compose to the same row as the fused kernel") {
    Grid3 in = make_random(DType::I32, 9, 11, 1, 1001);
    const int C = in.cols();
    CoeffRowI coeff;
    coeff.scalar = 3;
    for (int r = 2; r <= in.rows() - 3; ++r) {
        const int32_t* rows5[5] = {in.i32_row(r - 2, 0), in.i32_row(r - 1, 0), in.i32_row(r, 0),
                                   in.i32_row(r + 1, 0), in.i32_row(r + 2, 0)};
        std::vector<int32_t> fused(C), staged(C);
        hdiff_row(rows5, coeff, C, 1, false, fused.data());

        LapBundle<int64_t> lap;
        lap_stage_rows(rows5, C, lap);
        const int32_t* rows3[3] = {rows5[1], rows5[2], rows5[3]};
        FluxBundle<int128> flux;
        flux_mac_rows(lap, rows3, coeff, C, false, flux);
        flux_nonmac_row(flux, rows5[2], C, 1, staged.data());
        for (int c = 0; c < C; ++c) CHECK(staged[c] == fused[c]);
    }
}

TEST_CASE("parameter validation rejects bad hdiff inputs") {
    HdiffParams ok;
    CHECK_THROWS_AS(hdiff_reference(make_random(DType::I32, 4, 8, 1, 1), ok), Error);
    CHECK_THROWS_AS(hdiff_reference(make_random(DType::I32, 8, 4, 1, 1), ok), Error);

    HdiffParams bad_shift;
    bad_shift.srs_shift = 32;
    CHECK_THROWS_AS(hdiff_reference(make_random(DType::I32, 8, 8, 1, 1), bad_shift), Error);

    HdiffParams f32_shift;
    f32_shift.srs_shift = 1; // shift is an integer-store concept
    CHECK_THROWS_AS(hdiff_reference(make_random(DType::F32, 8, 8, 1, 1), f32_shift), Error);

    HdiffParams frac;
    frac.coeff = 1.5; // integral coefficient required for i32
    CHECK_THROWS_AS(hdiff_reference(make_random(DType::I32, 8, 8, 1, 1), frac), Error);
    CHECK_NOTHROW(hdiff_reference(make_random(DType::F32, 8, 8, 1, 1), frac));

    HdiffParams shape;
    shape.coeff_grid = make_random(DType::I32, 7, 8, 1, 2);
    CHECK_THROWS_AS(hdiff_reference(make_random(DType::I32, 8, 8, 1, 1), shape), Error);

    HdiffParams sweeps;
    sweeps.sweeps = 0;
    CHECK_THROWS_AS(hdiff_reference(make_random(DType::I32, 8, 8, 1, 1), sweeps), Error);

    // 5x5 is the smallest legal grid: exactly one interior point
    CHECK_NOTHROW(hdiff_reference(make_random(DType::I32, 5, 5, 1, 1), ok));
}
