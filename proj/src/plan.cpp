#include "stencilfab/plan.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "stencilfab/elementary.hpp"
#include "stencilfab/errors.hpp"

namespace stencilfab {

const char* role_name(Role r) {
    switch (r) {
        case Role::Mono: return "mono";
        case Role::Lap: return "lap";
        case Role::FluxMac: return "flux_mac";
        case Role::FluxNonMac: return "flux_nonmac";
        case Role::FluxMixed: return "flux_mixed";
        case Role::Elementary: return "elementary";
    }
    return "?";
}

Role role_from_name(const std::string& name) {
    if (name == "mono") return Role::Mono;
    if (name == "lap") return Role::Lap;
    if (name == "flux_mac") return Role::FluxMac;
    if (name == "flux_nonmac") return Role::FluxNonMac;
    if (name == "flux_mixed") return Role::FluxMixed;
    if (name == "elementary") return Role::Elementary;
    fail_parameter("unknown role '" + name + "'");
}

namespace {

bool materialized(const ObjectFifoSpec& f, const FifoConsumerSpec& c) {
    return c.slot >= 0 && !c.via_neighbor && f.link != LinkKind::Cascade;
}

} // namespace

DmaUsage dma_usage(const MappingPlan& plan, int slot_id) {
    DmaUsage u;
    for (const auto& f : plan.fifos) {
        if (f.producer_slot == slot_id &&
            (f.link == LinkKind::Stream || f.link == LinkKind::ShimWrite))
            ++u.out_uses;
        if (f.link == LinkKind::Stream || f.link == LinkKind::ShimRead)
            for (const auto& c : f.consumers)
                if (c.slot == slot_id && materialized(f, c)) ++u.in_uses;
    }
    return u;
}

int64_t slot_memory_bytes(const MappingPlan& plan, int slot_id) {
    int64_t bytes = 0;
    for (const auto& f : plan.fifos) {
        if (f.link == LinkKind::Cascade) continue; // register path, no memory
        if (f.producer_slot == slot_id) bytes += 2LL * f.slot_bytes; // staging
        for (const auto& c : f.consumers)
            if (c.slot == slot_id && materialized(f, c))
                bytes += static_cast<int64_t>(f.depth) * f.slot_bytes;
    }
    return bytes;
}

void validate_plan(const MappingPlan& plan, const FabricSpec& fabric) {
    validate_fabric(fabric);
    if (plan.kernel != "hdiff") stencil_spec(plan.kernel); // throws when unknown
    if (plan.rows < 1 || plan.cols < 1 || plan.depth < 1)
        fail_validation("plan grid shape must be positive");
    if (plan.kernel == "hdiff" && (plan.rows < 5 || plan.cols < 5))
        fail_validation("hdiff plans need rows, cols >= 5");
    if (plan.srs_shift < 0 || plan.srs_shift > 31)
        fail_validation("plan srs_shift out of range");
    if (plan.dtype == DType::F32 && plan.srs_shift != 0)
        fail_validation("plan srs_shift must be 0 for f32");
    if (plan.lanes < 1 || plan.lanes > fabric.array_rows)
        fail_validation("plan lanes must lie in [1, array_rows]");
    if (plan.blocks < 1) fail_validation("plan blocks must be >= 1");
    if (plan.slots.empty()) fail_validation("plan has no core slots");

    std::set<std::pair<int, int>> positions;
    for (std::size_t i = 0; i < plan.slots.size(); ++i) {
        const CoreSlot& s = plan.slots[i];
        if (s.id != static_cast<int>(i))
            fail_validation("slot ids must equal their index (slot " + std::to_string(i) + ")");
        if (s.col < 0 || s.col >= fabric.array_cols || s.row < 0 || s.row >= fabric.array_rows)
            fail_validation("slot " + std::to_string(s.id) + " placed off the array");
        if (!positions.insert({s.col, s.row}).second)
            fail_validation("two slots share position (" + std::to_string(s.col) + "," +
                            std::to_string(s.row) + ")");
    }
    for (int g : plan.gather_slots)
        if (g < 0 || g >= static_cast<int>(plan.slots.size()))
            fail_validation("gather slot out of range");

    auto slot_ok = [&](int id) { return id >= 0 && id < static_cast<int>(plan.slots.size()); };
    auto adjacent = [&](int a, int b) {
        const CoreSlot& sa = plan.slots[a];
        const CoreSlot& sb = plan.slots[b];
        return std::abs(sa.col - sb.col) + std::abs(sa.row - sb.row) <= 1;
    };

    std::set<std::string> names;
    for (const auto& f : plan.fifos) {
        const std::string where = "fifo '" + f.name + "'";
        if (f.name.empty()) fail_validation("fifo with empty name");
        if (!names.insert(f.name).second) fail_validation("duplicate " + where);
        if (f.depth < 1) fail_validation(where + " needs depth >= 1");
        if (f.slot_bytes < 1 || f.slot_values < 1)
            fail_validation(where + " needs positive slot_bytes and slot_values");
        if (f.consumers.empty()) fail_validation(where + " has no consumers");

        if (f.link == LinkKind::ShimRead) {
            if (f.producer_slot != -1)
                fail_validation(where + ": shim-read producer must be external");
            if (f.shim < 0 || f.shim >= fabric.shim_count || f.channel < 0 ||
                f.channel >= fabric.read_channels_per_shim)
                fail_validation(where + ": shim read channel out of range");
        } else if (f.link == LinkKind::ShimWrite) {
            if (!slot_ok(f.producer_slot))
                fail_validation(where + ": shim-write producer must be a core slot");
            if (f.shim < 0 || f.shim >= fabric.shim_count || f.channel < 0 ||
                f.channel >= fabric.write_channels_per_shim)
                fail_validation(where + ": shim write channel out of range");
            if (f.consumers.size() != 1 || f.consumers[0].slot != -1)
                fail_validation(where + ": shim-write consumer must be the single external sink");
        } else {
            if (!slot_ok(f.producer_slot))
                fail_validation(where + ": producer must be a core slot");
            if (f.shim != -1 || f.channel != -1)
                fail_validation(where + ": only shim fifos carry shim/channel");
        }

        int materialized_count = 0;
        for (const auto& c : f.consumers) {
            if (c.slot == -1) {
                if (f.link != LinkKind::ShimWrite)
                    fail_validation(where + ": external consumer on a non-shim-write fifo");
            } else if (!slot_ok(c.slot)) {
                fail_validation(where + ": consumer slot out of range");
            }
            if (c.window < 1 || c.step < 1 || c.offset < 0)
                fail_validation(where + ": consumer window/step/offset out of range");
            // A window larger than the ring depth is legal here but stalls at
            // runtime; the simulator reports it as a deadlock with the fifo name.
            if (c.via_neighbor && f.link == LinkKind::Cascade)
                fail_validation(where + ": cascade consumers cannot be via_neighbor");
            if (materialized(f, c)) ++materialized_count;
        }
        // Cascade is a register path and a shim write drains the producer's
        // staging over DMA; every other link needs a ring somebody owns.
        if (f.link != LinkKind::Cascade && f.link != LinkKind::ShimWrite &&
            materialized_count == 0)
            fail_validation(where + " has no materialized consumer ring");

        if (f.link == LinkKind::Cascade) {
            if (f.consumers.size() != 1)
                fail_validation(where + ": cascade fifos have exactly one consumer");
            const auto& c = f.consumers[0];
            const CoreSlot& ps = plan.slots[f.producer_slot];
            const CoreSlot& cs = plan.slots[c.slot];
            if (cs.col != ps.col + 1 || cs.row != ps.row)
                fail_validation(where + ": cascade consumer must be the next core in the row");
        }
        if (f.link == LinkKind::Direct) {
            for (const auto& c : f.consumers)
                if (c.slot >= 0 && !c.via_neighbor && !adjacent(f.producer_slot, c.slot))
                    fail_validation(where + ": direct consumer not adjacent to producer");
        }
        for (const auto& c : f.consumers) {
            if (!c.via_neighbor || c.slot < 0) continue;
            bool near_ring = false;
            for (const auto& other : f.consumers)
                if (materialized(f, other) && adjacent(c.slot, other.slot)) near_ring = true;
            if (!near_ring)
                fail_validation(where + ": via_neighbor consumer has no adjacent ring to read");
        }
    }

    for (const auto& s : plan.slots) {
        const DmaUsage u = dma_usage(plan, s.id);
        if (u.in_uses > fabric.dmas_per_core || u.out_uses > fabric.dmas_per_core)
            fail_validation("slot " + std::to_string(s.id) + " needs " +
                            std::to_string(u.in_uses) + " in / " + std::to_string(u.out_uses) +
                            " out DMA channels, budget is " +
                            std::to_string(fabric.dmas_per_core) + " per direction");
        const int64_t mem = slot_memory_bytes(plan, s.id);
        if (mem > fabric.data_mem_bytes)
            fail_validation("slot " + std::to_string(s.id) + " needs " + std::to_string(mem) +
                            " bytes of local memory, budget is " +
                            std::to_string(fabric.data_mem_bytes));
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::ordered_json plan_json(const MappingPlan& plan) {
    nlohmann::ordered_json j;
    j["plan_version"] = 1;
    j["design"] = plan.design;
    j["kernel"] = plan.kernel;
    j["dtype"] = dtype_name(plan.dtype);
    j["grid"] = {{"rows", plan.rows}, {"cols", plan.cols}, {"depth", plan.depth}};
    j["coeff"] = plan.coeff;
    j["srs_shift"] = plan.srs_shift;
    j["no_limiter"] = plan.no_limiter;
    j["lanes"] = plan.lanes;
    j["blocks"] = plan.blocks;
    j["gather_slots"] = plan.gather_slots;
    j["slots"] = nlohmann::ordered_json::array();
    for (const auto& s : plan.slots)
        j["slots"].push_back({{"id", s.id},
                              {"col", s.col},
                              {"row", s.row},
                              {"role", role_name(s.role)},
                              {"lane", s.lane},
                              {"block", s.block}});
    j["fifos"] = nlohmann::ordered_json::array();
    for (const auto& f : plan.fifos) {
        nlohmann::ordered_json fj;
        fj["name"] = f.name;
        fj["link"] = link_kind_name(f.link);
        fj["producer_slot"] = f.producer_slot;
        fj["depth"] = f.depth;
        fj["slot_bytes"] = f.slot_bytes;
        fj["slot_values"] = f.slot_values;
        if (f.shim >= 0) fj["shim"] = f.shim;
        if (f.channel >= 0) fj["channel"] = f.channel;
        fj["consumers"] = nlohmann::ordered_json::array();
        for (const auto& c : f.consumers)
            fj["consumers"].push_back({{"slot", c.slot},
                                       {"via_neighbor", c.via_neighbor},
                                       {"window", c.window},
                                       {"step", c.step},
                                       {"offset", c.offset}});
        j["fifos"].push_back(std::move(fj));
    }
    return j;
}

MappingPlan plan_from_json(const nlohmann::json& j) {
    MappingPlan plan;
    try {
        if (j.at("plan_version").get<int>() != 1) fail_validation("unsupported plan_version");
        plan.design = j.at("design").get<std::string>();
        plan.kernel = j.at("kernel").get<std::string>();
        plan.dtype = dtype_from_name(j.at("dtype").get<std::string>());
        plan.rows = j.at("grid").at("rows").get<int>();
        plan.cols = j.at("grid").at("cols").get<int>();
        plan.depth = j.at("grid").at("depth").get<int>();
        plan.coeff = j.at("coeff").get<double>();
        plan.srs_shift = j.at("srs_shift").get<int>();
        plan.no_limiter = j.at("no_limiter").get<bool>();
        plan.lanes = j.at("lanes").get<int>();
        plan.blocks = j.at("blocks").get<int>();
        plan.gather_slots = j.at("gather_slots").get<std::vector<int>>();
        for (const auto& sj : j.at("slots")) {
            CoreSlot s;
            s.id = sj.at("id").get<int>();
            s.col = sj.at("col").get<int>();
            s.row = sj.at("row").get<int>();
            s.role = role_from_name(sj.at("role").get<std::string>());
            s.lane = sj.at("lane").get<int>();
            s.block = sj.at("block").get<int>();
            plan.slots.push_back(s);
        }
        for (const auto& fj : j.at("fifos")) {
            ObjectFifoSpec f;
            f.name = fj.at("name").get<std::string>();
            f.link = link_kind_from_name(fj.at("link").get<std::string>());
            f.producer_slot = fj.at("producer_slot").get<int>();
            f.depth = fj.at("depth").get<int>();
            f.slot_bytes = fj.at("slot_bytes").get<int>();
            f.slot_values = fj.at("slot_values").get<int>();
            f.shim = fj.value("shim", -1);
            f.channel = fj.value("channel", -1);
            for (const auto& cj : fj.at("consumers")) {
                FifoConsumerSpec c;
                c.slot = cj.at("slot").get<int>();
                c.via_neighbor = cj.at("via_neighbor").get<bool>();
                c.window = cj.at("window").get<int>();
                c.step = cj.at("step").get<int>();
                c.offset = cj.at("offset").get<int>();
                f.consumers.push_back(c);
            }
            plan.fifos.push_back(std::move(f));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail_validation(std::string("bad plan JSON: ") + e.what());
    }
    return plan;
}

MappingPlan load_plan(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail_io("cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        fail_validation("bad plan JSON in '" + path + "': " + e.what());
    }
    return plan_from_json(j);
}

void save_plan(const MappingPlan& plan, const std::string& path) {
    std::ofstream os(path);
    if (!os) fail_io("cannot open '" + path + "' for writing");
    os << plan_json(plan).dump(2) << '\n';
    if (!os) fail_io("write failed for '" + path + "'");
}

} // namespace stencilfab
