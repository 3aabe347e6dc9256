#include "stencilfab/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "stencilfab/errors.hpp"

namespace stencilfab {

namespace {

int64_t ceil_div(int64_t num, int64_t den) { return (num + den - 1) / den; }

// Ceiling with a guard against ulp noise from products like 1040 * 1.3.
int64_t ceil_guarded(double x) { return static_cast<int64_t>(std::ceil(x - 1e-9)); }

} // namespace

RoleWork role_work_hdiff(Role role, int interior_width) {
    if (interior_width < 1) fail_parameter("interior width must be positive");
    const int64_t w = interior_width;
    RoleWork rw;
    switch (role) {
        case Role::Mono:
            rw.macs = 33 * w;        // 25 Laplacian + 8 flux
            rw.nonmacs = 12 * w;     // limiter tests, selects, combines
            rw.load_values = 33 * w;
            rw.store_values = 6 * w; // Laplacian intermediates + output row
            rw.srs_events = 2;       // intermediate spill + output store
            rw.mixed = true;
            break;
        case Role::Lap:
            rw.macs = 25 * w;
            rw.load_values = 25 * w;
            rw.store_values = 5 * w; // five Laplacian-result rows
            break;
        case Role::FluxMac:
            rw.macs = 8 * w;
            rw.load_values = 13 * w; // five Laplacian rows + three psi windows
            rw.store_values = 6 * w; // candidates, masks, psi row
            break;
        case Role::FluxNonMac:
            rw.nonmacs = 12 * w;
            rw.load_values = 10 * w;
            rw.store_values = w;
            rw.srs_events = 1;
            break;
        case Role::FluxMixed:
            rw.macs = 8 * w;
            rw.nonmacs = 12 * w;
            rw.load_values = 13 * w;
            rw.store_values = w;
            rw.srs_events = 1;
            rw.mixed = true;
            break;
        case Role::Elementary:
            fail_parameter("elementary roles need role_work_elementary");
    }
    return rw;
}

RoleWork role_work_elementary(const StencilSpec& spec, int updated_width) {
    if (updated_width < 1) fail_parameter("updated width must be positive");
    const int64_t w = updated_width;
    RoleWork rw;
    rw.macs = static_cast<int64_t>(spec.taps.size()) * w;
    rw.load_values = static_cast<int64_t>(spec.taps.size()) * w;
    rw.store_values = w;
    rw.srs_events = 1;
    return rw;
}

KernelCycles core_kernel_cycles(const FabricSpec& fabric, const RoleWork& work, DType dtype) {
    validate_fabric(fabric);
    KernelCycles kc;
    kc.mac_cycles = ceil_div(work.macs, fabric.datapath.macs_per_cycle);
    if (dtype == DType::F32)
        kc.mac_cycles = ceil_guarded(static_cast<double>(kc.mac_cycles) * fabric.f32_penalty);
    kc.nonmac_cycles = ceil_div(work.nonmacs, fabric.datapath.nonmac_per_cycle);
    kc.mem_cycles = ceil_div((work.load_values + work.store_values) * fabric.datapath.elem_bits,
                             fabric.datapath.load_bits_per_cycle);
    return kc;
}

int64_t row_occupancy_cycles(const FabricSpec& fabric, const RoleWork& work, DType dtype) {
    const KernelCycles kc = core_kernel_cycles(fabric, work, dtype);
    const double penalty = work.mixed ? fabric.mixed_penalty : 1.0;
    int64_t comp = ceil_guarded(static_cast<double>(kc.compute_cycles()) * penalty /
                                fabric.vliw_efficiency);
    if (dtype == DType::I32) comp += static_cast<int64_t>(work.srs_events) * fabric.srs_latency_cycles;
    if (work.cascade_recv_values > 0) {
        const int64_t per_cycle = std::max(1, fabric.cascade_bits / 48);
        comp += ceil_div(work.cascade_recv_values, per_cycle) + fabric.srs_latency_cycles;
    }
    return std::max(comp, kc.mem_cycles);
}

int64_t link_row_cycles(const FabricSpec& fabric, LinkKind kind, int slot_bytes,
                        int slot_values) {
    if (slot_bytes < 1 || slot_values < 1)
        fail_parameter("link timing needs positive slot bytes and values");
    if (kind == LinkKind::Cascade) {
        const int64_t per_cycle = std::max(1, fabric.cascade_bits / 48);
        return ceil_div(slot_values, per_cycle);
    }
    return ceil_div(static_cast<int64_t>(slot_bytes) * 8,
                    static_cast<int64_t>(link_bits_per_cycle(fabric, kind)));
}

double predict_row_period(const MappingPlan& plan, const FabricSpec& fabric) {
    validate_plan(plan, fabric);
    const bool hdiff = plan.kernel == "hdiff";
    const int width = hdiff ? plan.cols - 4
                            : plan.cols - 2 * stencil_spec(plan.kernel).col_halo;
    double period = 0.0;
    for (const auto& slot : plan.slots) {
        if (slot.block != 0) continue; // blocks are identical replicas
        RoleWork work = hdiff ? role_work_hdiff(slot.role, width)
                              : role_work_elementary(stencil_spec(plan.kernel), width);
        for (const auto& f : plan.fifos)
            if (f.link == LinkKind::Cascade && f.consumers[0].slot == slot.id)
                work.cascade_recv_values += f.slot_values;
        double stage = static_cast<double>(row_occupancy_cycles(fabric, work, plan.dtype));
        for (const auto& f : plan.fifos) {
            if (f.producer_slot != slot.id) continue;
            const bool self_local = f.consumers.size() == 1 && f.consumers[0].slot == slot.id;
            if (self_local) continue;
            stage = std::max(stage, static_cast<double>(link_row_cycles(
                                        fabric, f.link, f.slot_bytes, f.slot_values)));
        }
        stage /= plan.lanes; // each lane computes every lanes-th row
        const bool is_gather = std::find(plan.gather_slots.begin(), plan.gather_slots.end(),
                                         slot.id) != plan.gather_slots.end();
        if (is_gather) {
            const double gather_row =
                std::ceil(static_cast<double>(plan.cols) * fabric.datapath.elem_bits /
                          fabric.datapath.load_bits_per_cycle);
            stage += gather_row; // reorder copy runs for every row
        }
        period = std::max(period, stage);
    }
    // Shim traffic moves one full-width row per output row in and out.
    const int row_bytes = plan.cols * (fabric.datapath.elem_bits / 8);
    const double shim_row = static_cast<double>(
        link_row_cycles(fabric, LinkKind::ShimRead, row_bytes, plan.cols));
    return std::max(period, shim_row);
}

} // namespace stencilfab
