#pragma once
/// @file simulator.hpp
/// @brief Deterministic discrete-event simulation of a mapping plan.
///
/// Every core, link, and shim DMA channel is a resource with a free-at time;
/// stage processes acquire their input windows, book their row occupancy on
/// the core, hand the produced row to the outgoing link, and release inputs,
/// exactly following each FIFO's declared window/step/offset discipline.
/// Producers into core-to-core links compute into a two-slot staging buffer;
/// the consumer-side ring slot is reserved when the transfer starts and
/// pushed when it ends, so transfers overlap the next row's compute and a
/// slow consumer back-pressures the link, the staging, and then the core.
/// A broadcast fifo materializes one ring per consumer (matching the mapper's
/// memory accounting); shim readers fill each ring at its own pace, so one
/// lagging consumer does not throttle the others, while via_neighbor
/// consumers share the adjacent owner's ring and its back-pressure.
/// Ties in the event queue break by insertion order, which makes runs
/// bit-reproducible.
///
/// Functional payloads travel through the same row-stage kernels the golden
/// reference uses, so a correct simulation produces bitwise-identical output.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stencilfab/fabric.hpp"
#include "stencilfab/grid.hpp"
#include "stencilfab/object_fifo.hpp"
#include "stencilfab/plan.hpp"

namespace stencilfab {

struct SimOptions {
    bool trace_fifos = false; ///< record per-fifo acquire/release sequences
};

struct CoreStat {
    int slot = 0;
    Role role = Role::Mono;
    int64_t busy_cycles = 0;
    int64_t rows_computed = 0;
    double utilization = 0.0; ///< busy / runtime
};

struct LinkStat {
    std::string fifo;
    LinkKind link = LinkKind::Direct;
    int64_t transfers = 0;
    int64_t bytes_moved = 0;     ///< transfers * slot_bytes
    int64_t bytes_delivered = 0; ///< bytes_moved * materialized consumers
    int64_t busy_cycles = 0;
};

struct SimResult {
    Grid3 output;
    int64_t runtime_cycles = 0;
    double steady_row_period = 0.0; ///< median gap between output-row completions
    int64_t rows_written = 0;
    int64_t bytes_in = 0;  ///< bytes read from external memory
    int64_t bytes_out = 0; ///< bytes written to external memory
    std::vector<CoreStat> cores;
    std::vector<LinkStat> links;
    std::map<std::string, std::vector<FifoTraceEvent>> traces; ///< when enabled

    SimResult() : output(DType::I32, 1, 1, 1) {}
};

/// Simulates `plan` on `input` (shape and dtype must match the plan).
/// Throws a deadlock error naming every blocked process and the fifo state it
/// is waiting for when the dataflow stalls.
SimResult simulate(const Grid3& input, const MappingPlan& plan, const FabricSpec& fabric,
                   const SimOptions& opts = {});

} // namespace stencilfab
