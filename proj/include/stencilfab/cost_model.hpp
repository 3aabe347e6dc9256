#pragma once
/// @file cost_model.hpp
/// @brief Per-row timing model for core roles and links.
///
/// A core's cost for one output row is derived from its issue counts:
/// MAC cycles ceil(macs/macs_per_cycle) (floating point derated by
/// f32_penalty), non-MAC cycles likewise, the sum stretched by mixed_penalty
/// when a loop interleaves MAC and non-MAC work and by 1/vliw_efficiency for
/// realistic slot fill, plus a fixed shift-round-saturate burst per store
/// event (integer kernels only) and a drain cost for rows arriving over the
/// cascade. The row occupancy is the maximum of that compute time and the
/// local-memory load/store time.
///
/// core_kernel_cycles reports the undecorated issue counts (no efficiency
/// factors); row_occupancy_cycles is what the simulator books on a core.

#include <cstdint>

#include "stencilfab/elementary.hpp"
#include "stencilfab/fabric.hpp"
#include "stencilfab/plan.hpp"

namespace stencilfab {

/// Work one core performs per output row, in datapath issue units.
struct RoleWork {
    int64_t macs = 0;
    int64_t nonmacs = 0;
    int64_t load_values = 0;
    int64_t store_values = 0;
    int srs_events = 0; ///< shift-round-saturate store bursts (integer only)
    bool mixed = false; ///< loop interleaves MAC and non-MAC work
    int64_t cascade_recv_values = 0; ///< values drained from the cascade input
};

/// Issue counts for a horizontal-diffusion role over one row of
/// `interior_width` output cells.
RoleWork role_work_hdiff(Role role, int interior_width);

/// Whole-kernel work for one row of an elementary stencil with
/// `updated_width` output cells.
RoleWork role_work_elementary(const StencilSpec& spec, int updated_width);

/// Ideal per-row issue cycles, before any efficiency derating.
struct KernelCycles {
    int64_t mac_cycles = 0;
    int64_t nonmac_cycles = 0;
    int64_t mem_cycles = 0;
    int64_t compute_cycles() const { return mac_cycles + nonmac_cycles; }
    int64_t bound() const {
        return compute_cycles() > mem_cycles ? compute_cycles() : mem_cycles;
    }
};

KernelCycles core_kernel_cycles(const FabricSpec& fabric, const RoleWork& work, DType dtype);

/// Derated cycles the core is busy for one output row.
int64_t row_occupancy_cycles(const FabricSpec& fabric, const RoleWork& work, DType dtype);

/// Cycles one link is busy moving one fifo slot. The cascade carries wide
/// accumulator values (48 bits each); every other link moves the slot's
/// modeled bytes at its bit rate.
int64_t link_row_cycles(const FabricSpec& fabric, LinkKind kind, int slot_bytes,
                        int slot_values);

/// Closed-form steady-state cycles between consecutive output rows of one
/// block: the busiest stage (row occupancy or its outgoing transfer), divided
/// by the lane count since each lane computes every lanes-th row. Gather and
/// shim traffic are included as per-row terms.
double predict_row_period(const MappingPlan& plan, const FabricSpec& fabric);

} // namespace stencilfab
