// Mapping-plan structure: validation rules, memory/DMA accounting, JSON.

#include <functional>

#include "doctest.h"
#include "stencilfab/errors.hpp"
#include "stencilfab/plan.hpp"

using namespace stencilfab;

namespace {

// Smallest valid plan: one Mono core fed by a shim read, draining to a shim
// write. 8x8x1 grid, 32-byte rows.
MappingPlan base_plan() {
    MappingPlan p;
    p.design = "single_i32";
    p.kernel = "hdiff";
    p.dtype = DType::I32;
    p.rows = 8;
    p.cols = 8;
    p.depth = 1;

    CoreSlot s;
    s.id = 0;
    s.col = 0;
    s.row = 0;
    s.role = Role::Mono;
    p.slots.push_back(s);

    ObjectFifoSpec psi;
    psi.name = "psi";
    psi.link = LinkKind::ShimRead;
    psi.producer_slot = -1;
    psi.depth = 5;
    psi.slot_bytes = 32;
    psi.slot_values = 8;
    psi.shim = 0;
    psi.channel = 0;
    psi.consumers.push_back({0, false, 5, 1, 0});
    p.fifos.push_back(psi);

    ObjectFifoSpec out;
    out.name = "out";
    out.link = LinkKind::ShimWrite;
    out.producer_slot = 0;
    out.depth = 2;
    out.slot_bytes = 32;
    out.slot_values = 8;
    out.shim = 0;
    out.channel = 0;
    out.consumers.push_back({-1, false, 1, 1, 0});
    p.fifos.push_back(out);
    return p;
}

// Three cores in an L: 0 at (0,0), 1 at (1,0), 2 at (1,1), with a direct fifo
// 0 -> {1 materialized, 2 via_neighbor}.
MappingPlan lane_plan() {
    MappingPlan p = base_plan();
    p.slots[0].role = Role::Lap;
    CoreSlot s1;
    s1.id = 1;
    s1.col = 1;
    s1.row = 0;
    s1.role = Role::FluxMixed;
    CoreSlot s2;
    s2.id = 2;
    s2.col = 1;
    s2.row = 1;
    s2.role = Role::FluxMixed;
    p.slots.push_back(s1);
    p.slots.push_back(s2);

    ObjectFifoSpec lap;
    lap.name = "lap";
    lap.link = LinkKind::Direct;
    lap.producer_slot = 0;
    lap.depth = 3;
    lap.slot_bytes = 100;
    lap.slot_values = 20;
    lap.consumers.push_back({1, false, 1, 1, 0});
    lap.consumers.push_back({2, true, 1, 1, 0});
    p.fifos.push_back(lap);
    p.fifos[1].producer_slot = 1; // move the shim write off the Lap core
    return p;
}

void expect_invalid(MappingPlan p, const std::function<void(MappingPlan&)>& mutate) {
    mutate(p);
    CHECK_THROWS_AS(validate_plan(p, FabricSpec{}), Error);
}

} // namespace

TEST_CASE("the base and lane plans validate") {
    CHECK_NOTHROW(validate_plan(base_plan(), FabricSpec{}));
    CHECK_NOTHROW(validate_plan(lane_plan(), FabricSpec{}));
}

TEST_CASE("role names round-trip") {
    for (Role r : {Role::Mono, Role::Lap, Role::FluxMac, Role::FluxNonMac, Role::FluxMixed,
                   Role::Elementary})
        CHECK(role_from_name(role_name(r)) == r);
    CHECK_THROWS_AS(role_from_name("dispatcher"), Error);
}

TEST_CASE("plan validation rejects structural errors") {
    expect_invalid(base_plan(), [](MappingPlan& p) { p.slots[0].id = 1; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.slots[0].col = 50; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.rows = 4; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.kernel = "unknown_kernel"; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.lanes = 9; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.slots.clear(); });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.gather_slots = {3}; });
    expect_invalid(base_plan(), [](MappingPlan& p) {
        p.dtype = DType::F32;
        p.srs_shift = 1;
    });
    expect_invalid(lane_plan(), [](MappingPlan& p) {
        // duplicate position
        p.slots[2].col = 1;
        p.slots[2].row = 0;
    });
}

TEST_CASE("plan validation rejects bad fifos") {
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].name = ""; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[1].name = "psi"; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].depth = 0; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].slot_bytes = 0; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].consumers.clear(); });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].producer_slot = 0; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].channel = 2; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].shim = 16; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[1].consumers[0].slot = 0; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].consumers[0].window = 0; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].consumers[0].step = 0; });
    expect_invalid(base_plan(), [](MappingPlan& p) { p.fifos[0].consumers[0].offset = -1; });
    // a non-shim fifo must not carry shim coordinates
    expect_invalid(lane_plan(), [](MappingPlan& p) { p.fifos[2].shim = 0; });
    // external consumer is only legal on a shim write
    expect_invalid(lane_plan(), [](MappingPlan& p) { p.fifos[2].consumers[0].slot = -1; });
}

TEST_CASE("window larger than depth is structurally legal") {
    // the validator accepts it; the simulator reports the resulting stall as
    // a deadlock (covered in the simulator tests)
    MappingPlan p = base_plan();
    p.fifos[0].depth = 4; // window stays 5
    CHECK_NOTHROW(validate_plan(p, FabricSpec{}));
}

TEST_CASE("link adjacency rules") {
    // direct consumers must touch the producer
    expect_invalid(lane_plan(), [](MappingPlan& p) {
        p.slots[1].col = 3; // (3,0) is two hops from (0,0)
        p.slots[2].col = 3;
        p.slots[2].row = 0;
        p.slots[2].col = 4;
    });
    // via_neighbor must sit next to a materialized ring
    expect_invalid(lane_plan(), [](MappingPlan& p) {
        p.slots[2].col = 0;
        p.slots[2].row = 2; // away from slot 1's ring
    });
    // cascade: exactly one consumer, on the next core in the row
    MappingPlan p = lane_plan();
    p.fifos[2].link = LinkKind::Cascade;
    p.fifos[2].consumers.pop_back(); // single consumer at (1,0): valid
    CHECK_NOTHROW(validate_plan(p, FabricSpec{}));
    expect_invalid(p, [](MappingPlan& q) { q.fifos[2].consumers[0].slot = 2; });
    expect_invalid(p, [](MappingPlan& q) {
        q.fifos[2].consumers.push_back({2, false, 1, 1, 0});
    });
    expect_invalid(p, [](MappingPlan& q) { q.fifos[2].consumers[0].via_neighbor = true; });
    // stream links have no adjacency requirement
    MappingPlan far = lane_plan();
    far.fifos[2].link = LinkKind::Stream;
    far.slots[1].col = 10;
    far.slots[2].col = 10;
    far.slots[2].row = 1;
    CHECK_NOTHROW(validate_plan(far, FabricSpec{}));
}

TEST_CASE("every non-cascade fifo needs a materialized ring") {
    expect_invalid(lane_plan(), [](MappingPlan& p) {
        p.fifos[2].consumers[0].via_neighbor = true; // both consumers via_neighbor now
    });
}

TEST_CASE("memory accounting follows the ring/staging convention") {
    MappingPlan p = lane_plan();
    // slot 0 (Lap): psi ring 5*32 + lap staging 2*100 = 360
    CHECK(slot_memory_bytes(p, 0) == 5 * 32 + 2 * 100);
    // slot 1: lap ring 3*100 + shim-write staging 2*32 = 364
    CHECK(slot_memory_bytes(p, 1) == 3 * 100 + 2 * 32);
    // slot 2 reads slot 1's ring in place: no memory of its own
    CHECK(slot_memory_bytes(p, 2) == 0);

    // the cascade is a register path: no staging, no ring
    p.fifos[2].link = LinkKind::Cascade;
    p.fifos[2].consumers.pop_back();
    CHECK(slot_memory_bytes(p, 0) == 5 * 32);
    CHECK(slot_memory_bytes(p, 1) == 2 * 32);

    // budget enforcement
    MappingPlan big = base_plan();
    big.fifos[0].depth = 2000;
    big.fifos[0].slot_bytes = 1024; // 2 MB ring
    CHECK_THROWS_AS(validate_plan(big, FabricSpec{}), Error);
}

TEST_CASE("dma accounting: stream and shim endpoints only") {
    MappingPlan p = lane_plan();
    DmaUsage u0 = dma_usage(p, 0);
    CHECK(u0.in_uses == 1);  // shim read into the psi ring
    CHECK(u0.out_uses == 0); // direct link costs no DMA
    DmaUsage u1 = dma_usage(p, 1);
    CHECK(u1.in_uses == 0);  // direct consumer
    CHECK(u1.out_uses == 1); // shim write
    p.fifos[2].link = LinkKind::Stream;
    u1 = dma_usage(p, 1);
    CHECK(dma_usage(p, 0).out_uses == 1); // stream out of the producer
    CHECK(u1.in_uses == 1);               // stream into the materialized consumer
    DmaUsage u2 = dma_usage(p, 2);
    CHECK(u2.in_uses == 0); // via_neighbor consumers pay no DMA

    // over budget: three stream inputs on one core
    MappingPlan over = base_plan();
    over.slots[0].role = Role::FluxMixed;
    for (int k = 0; k < 3; ++k) {
        CoreSlot s;
        s.id = 1 + k;
        s.col = 1 + k;
        s.row = 1;
        s.role = Role::Lap;
        over.slots.push_back(s);
        ObjectFifoSpec f;
        f.name = "in" + std::to_string(k);
        f.link = LinkKind::Stream;
        f.producer_slot = 1 + k;
        f.depth = 2;
        f.slot_bytes = 16;
        f.slot_values = 4;
        f.consumers.push_back({0, false, 1, 1, 0});
        over.fifos.push_back(f);
    }
    CHECK_THROWS_AS(validate_plan(over, FabricSpec{}), Error);
}

TEST_CASE("plan json round-trips and validates") {
    MappingPlan p = lane_plan();
    p.gather_slots = {2};
    p.lanes = 2;
    p.coeff = 3.0;
    p.srs_shift = 4;
    auto j = plan_json(p);
    CHECK(j["plan_version"] == 1);
    MappingPlan back = plan_from_json(j);
    CHECK(back.design == p.design);
    CHECK(back.kernel == "hdiff");
    CHECK(back.dtype == DType::I32);
    CHECK(back.rows == 8);
    CHECK(back.coeff == 3.0);
    CHECK(back.srs_shift == 4);
    CHECK(back.lanes == 2);
    CHECK(back.gather_slots == std::vector<int>{2});
    REQUIRE(back.slots.size() == p.slots.size());
    CHECK(back.slots[1].role == Role::FluxMixed);
    REQUIRE(back.fifos.size() == p.fifos.size());
    CHECK(back.fifos[2].link == LinkKind::Direct);
    CHECK(back.fifos[2].consumers[1].via_neighbor);
    CHECK(back.fifos[0].shim == 0);
    CHECK(back.fifos[2].shim == -1);
    CHECK_NOTHROW(validate_plan(back, FabricSpec{}));
    CHECK(plan_json(back) == j);

    CHECK_THROWS_AS(plan_from_json(nlohmann::json{{"plan_version", 2}}), Error);
    CHECK_THROWS_AS(plan_from_json(nlohmann::json{{"plan_version", 1}}), Error);
}
