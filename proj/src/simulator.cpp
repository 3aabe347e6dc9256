#include "stencilfab/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>

#include "stencilfab/cost_model.hpp"
#include "stencilfab/elementary.hpp"
#include "stencilfab/errors.hpp"
#include "stencilfab/hdiff.hpp"

namespace stencilfab {

namespace {

// ---------------------------------------------------------------------------
// Engine primitives
// ---------------------------------------------------------------------------

struct Resource {
    int64_t free_at = 0;
    int64_t busy = 0;
};

struct Booking {
    int64_t start = 0, end = 0;
};

Booking book(Resource& r, int64_t now, int64_t dur) {
    const int64_t start = std::max(now, r.free_at);
    r.free_at = start + dur;
    r.busy += dur;
    return {start, start + dur};
}

struct Event {
    int64_t time = 0;
    uint64_t seq = 0;
    std::function<void()> fn;
};
struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
};

struct Waiter {
    std::function<bool()> ready;
    std::function<void()> resume;
    std::string who;
    std::string what;
};

/// Producers into core-to-core links compute into a local double buffer and
/// hand finished rows to the link; the consumer-side ring slot is taken when
/// the transfer starts and pushed when it ends, so a slow consumer stalls the
/// link, the link stalls the staging, and the staging stalls the core.
constexpr int kStagingSlots = 2;

/// Physical realization of one fifo. Every materialized consumer owns its own
/// ring of `depth` slots (exactly what the mapper charges to its local
/// memory), and a via_neighbor consumer shares the ring of the adjacent
/// materialized consumer it reads in place. Producer-side operations fan out
/// to every ring; shim readers instead drive each ring at its own pace so one
/// lagging consumer does not throttle the others. A cascade is a single
/// register path and keeps one ring for all of its consumers.
class RingSet {
public:
    RingSet(const ObjectFifoSpec& spec, const MappingPlan& plan, bool trace) : spec_(spec) {
        const auto& cons = spec.consumers;
        std::vector<std::vector<int>> members;
        std::vector<int> owner; // group index -> owning consumer index
        if (spec.link != LinkKind::Cascade)
            for (std::size_t ci = 0; ci < cons.size(); ++ci)
                if (cons[ci].slot < 0 || !cons[ci].via_neighbor) {
                    owner.push_back(static_cast<int>(ci));
                    members.push_back({static_cast<int>(ci)});
                }
        if (members.empty()) { // cascade, or defensively one shared ring
            members.emplace_back(cons.size());
            std::iota(members.back().begin(), members.back().end(), 0);
        } else {
            for (std::size_t ci = 0; ci < cons.size(); ++ci) {
                if (cons[ci].slot < 0 || !cons[ci].via_neighbor) continue;
                const CoreSlot& via = plan.slots[cons[ci].slot];
                int target = 0;
                for (std::size_t g = 0; g < owner.size(); ++g) {
                    if (cons[owner[g]].slot < 0) continue;
                    const CoreSlot& own = plan.slots[cons[owner[g]].slot];
                    if (std::abs(via.col - own.col) + std::abs(via.row - own.row) == 1) {
                        target = static_cast<int>(g);
                        break;
                    }
                }
                members[target].push_back(static_cast<int>(ci));
            }
        }
        where_.resize(cons.size());
        for (std::size_t g = 0; g < members.size(); ++g) {
            ObjectFifoSpec sub = spec;
            sub.consumers.clear();
            for (std::size_t li = 0; li < members[g].size(); ++li) {
                where_[members[g][li]] = {static_cast<int>(g), static_cast<int>(li)};
                sub.consumers.push_back(cons[members[g][li]]);
            }
            rings_.emplace_back(sub, trace);
        }
    }

    const ObjectFifoSpec& spec() const { return spec_; }
    int group_count() const { return static_cast<int>(rings_.size()); }

    // --- consumer side (plan-level consumer indices) ---
    bool can_acquire(int ci, int n) const { return ring(ci).can_acquire(local(ci), n); }
    void acquire(int ci, int n) { ring(ci).acquire(local(ci), n); }
    const PayloadPtr& slot(int ci, int idx) const { return ring(ci).slot(local(ci), idx); }
    bool can_release(int ci, int n) const { return ring(ci).can_release(local(ci), n); }
    void release(int ci, int n) { ring(ci).release(local(ci), n); }
    int64_t released(int ci) const { return ring(ci).released(local(ci)); }

    // --- producer side, fanned out to every ring ---
    bool can_reserve() const {
        for (const auto& r : rings_)
            if (!r.can_reserve()) return false;
        return true;
    }
    void reserve() {
        for (auto& r : rings_) r.reserve();
    }
    void push(const PayloadPtr& payload) {
        for (auto& r : rings_) r.push(payload);
    }

    // --- producer side, one ring at a time (shim readers) ---
    bool can_reserve(int g) const { return rings_[g].can_reserve(); }
    void reserve(int g) { rings_[g].reserve(); }
    void push(int g, PayloadPtr payload) { rings_[g].push(std::move(payload)); }

    int64_t pushes() const {
        int64_t most = 0;
        for (const auto& r : rings_) most = std::max(most, r.pushes());
        return most;
    }
    int materialized_consumers() const {
        int n = 0;
        for (const auto& r : rings_) n += r.materialized_consumers();
        return n;
    }
    /// Ring traces in group order (a single-ring fifo reads verbatim).
    std::vector<FifoTraceEvent> trace() const {
        std::vector<FifoTraceEvent> all;
        for (const auto& r : rings_)
            all.insert(all.end(), r.trace().begin(), r.trace().end());
        return all;
    }

private:
    ObjectFifoRuntime& ring(int ci) { return rings_[where_[ci].first]; }
    const ObjectFifoRuntime& ring(int ci) const { return rings_[where_[ci].first]; }
    int local(int ci) const { return where_[ci].second; }

    ObjectFifoSpec spec_;
    std::vector<ObjectFifoRuntime> rings_;
    std::vector<std::pair<int, int>> where_; ///< consumer index -> (group, local)
};

struct SimFifo {
    SimFifo(const ObjectFifoSpec& spec, const MappingPlan& plan, bool trace)
        : rt(spec, plan, trace) {}
    RingSet rt;
    Resource link;               ///< dedicated transfer resource (core-to-core links)
    Resource* channel = nullptr; ///< shared shim channel resource, when a shim fifo
    int64_t row_cycles = 0;      ///< transfer cycles per slot
    int staging_free = kStagingSlots;
    std::deque<PayloadPtr> pending; ///< computed rows awaiting their transfer
    bool pumping = false;           ///< a transfer is in flight
    bool pump_waiting = false;      ///< the pump has a registered ring waiter
    LinkStat stat;
    std::vector<Waiter> waiters;
};

// One (plane-sized) consumption segment: the items computed and the number of
// input pushes the segment spans (for offset and terminal releases).
struct Segment {
    std::vector<std::pair<int, int>> items; ///< (plane, output row)
    int64_t psi_pushes = 0;
};

/// How a stage disposes of a finished row.
enum class OutKind {
    SelfLocal, ///< producer and consumer share the core: plain hand-off
    Shim,      ///< ring is the producer-side staging, drained by the shim writer
    Linked     ///< core-to-core link: staging + pumped transfer
};

struct StageProc {
    int slot = -1;
    Role role = Role::Mono;
    int psi_fifo = -1, psi_cons = -1;
    int psi_window = 0, psi_step = 1, psi_offset = 0;
    int aux_fifo = -1, aux_cons = -1;
    int out_fifo = -1;
    OutKind out_kind = OutKind::Linked;
    int64_t occupancy = 0;
    std::vector<Segment> segments;
    // iteration state
    std::size_t seg = 0;
    std::size_t item = 0;
    int64_t psi_seg_base = 0; ///< released cursor value at segment start
    bool done = false;
};

struct GatherProc {
    int slot = -1;
    std::vector<int> lane_fifos; ///< lane index -> fifo index
    std::vector<std::pair<int, int>> items;
    int out_fifo = -1;
    int64_t copy_cycles = 0;
    std::size_t item = 0;
    bool done = false;
};

struct ReaderProc {
    int fifo = -1;
    int group = 0; ///< destination ring; group 0 carries the channel accounting
    std::vector<std::pair<int, int>> rows; ///< (plane, grid row) push order
    std::size_t idx = 0;
    bool done = false;
};

struct WriterProc {
    int fifo = -1;
    int64_t expected = 0;
    int64_t handled = 0;
    bool done = false;
};

// ---------------------------------------------------------------------------
// Functional row computation (shared kernels; full-precision payloads)
// ---------------------------------------------------------------------------

RowPayload compute_stage_row(const MappingPlan& plan, Role role,
                             const std::vector<const RowPayload*>& psi,
                             const RowPayload* aux, int plane, int row) {
    const int C = plan.cols;
    RowPayload out;
    out.plane = plane;
    out.row = row;
    const bool i32 = plan.dtype == DType::I32;
    CoeffRowI ci;
    ci.scalar = static_cast<int64_t>(plan.coeff);
    CoeffRowF cf;
    cf.scalar = plan.coeff;

    auto psi_i32 = [&](int k) { return psi[k]->psi_i.data(); };
    auto psi_f32 = [&](int k) { return psi[k]->psi_f.data(); };

    switch (role) {
        case Role::Mono: {
            if (i32) {
                const int32_t* rows5[5] = {psi_i32(0), psi_i32(1), psi_i32(2), psi_i32(3),
                                           psi_i32(4)};
                out.psi_i.resize(C);
                hdiff_row(rows5, ci, C, plan.srs_shift, plan.no_limiter, out.psi_i.data());
            } else {
                const float* rows5[5] = {psi_f32(0), psi_f32(1), psi_f32(2), psi_f32(3),
                                         psi_f32(4)};
                out.psi_f.resize(C);
                hdiff_row(rows5, cf, C, plan.no_limiter, out.psi_f.data());
            }
            break;
        }
        case Role::Lap: {
            if (i32) {
                const int32_t* rows5[5] = {psi_i32(0), psi_i32(1), psi_i32(2), psi_i32(3),
                                           psi_i32(4)};
                lap_stage_rows(rows5, C, out.lap_i);
            } else {
                const float* rows5[5] = {psi_f32(0), psi_f32(1), psi_f32(2), psi_f32(3),
                                         psi_f32(4)};
                lap_stage_rows(rows5, C, out.lap_f);
            }
            break;
        }
        case Role::FluxMac: {
            if (i32) {
                const int32_t* rows3[3] = {psi_i32(0), psi_i32(1), psi_i32(2)};
                flux_mac_rows(aux->lap_i, rows3, ci, C, plan.no_limiter, out.flux_i);
                out.psi_i = psi[1]->psi_i; // pass the centre row along for the store stage
            } else {
                const float* rows3[3] = {psi_f32(0), psi_f32(1), psi_f32(2)};
                flux_mac_rows(aux->lap_f, rows3, cf, C, plan.no_limiter, out.flux_f);
                out.psi_f = psi[1]->psi_f;
            }
            break;
        }
        case Role::FluxNonMac: {
            if (i32) {
                out.psi_i.resize(C);
                flux_nonmac_row(aux->flux_i, aux->psi_i.data(), C, plan.srs_shift,
                                out.psi_i.data());
            } else {
                out.psi_f.resize(C);
                flux_nonmac_row(aux->flux_f, aux->psi_f.data(), C, out.psi_f.data());
            }
            break;
        }
        case Role::FluxMixed: {
            if (i32) {
                const int32_t* rows3[3] = {psi_i32(0), psi_i32(1), psi_i32(2)};
                FluxBundle<int128> flux;
                flux_mac_rows(aux->lap_i, rows3, ci, C, plan.no_limiter, flux);
                out.psi_i.resize(C);
                flux_nonmac_row(flux, psi_i32(1), C, plan.srs_shift, out.psi_i.data());
            } else {
                const float* rows3[3] = {psi_f32(0), psi_f32(1), psi_f32(2)};
                FluxBundle<double> flux;
                flux_mac_rows(aux->lap_f, rows3, cf, C, plan.no_limiter, flux);
                out.psi_f.resize(C);
                flux_nonmac_row(flux, psi_f32(1), C, out.psi_f.data());
            }
            break;
        }
        case Role::Elementary: {
            const StencilSpec& spec = stencil_spec(plan.kernel);
            if (i32) {
                const int32_t* rows3[3] = {psi_i32(0),
                                           psi_i32(spec.row_halo == 1 ? 1 : 0),
                                           psi_i32(spec.row_halo == 1 ? 2 : 0)};
                out.psi_i.resize(C);
                elementary_row(spec, rows3, C, out.psi_i.data());
            } else {
                const float* rows3[3] = {psi_f32(0),
                                         psi_f32(spec.row_halo == 1 ? 1 : 0),
                                         psi_f32(spec.row_halo == 1 ? 2 : 0)};
                out.psi_f.resize(C);
                elementary_row(spec, rows3, C, out.psi_f.data());
            }
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The simulation
// ---------------------------------------------------------------------------

class Sim {
public:
    Sim(const Grid3& input, const MappingPlan& plan, const FabricSpec& fabric,
        const SimOptions& opts)
        : input_(input), plan_(plan), fabric_(fabric), opts_(opts), result_() {
        validate_plan(plan, fabric);
        if (input.rows() != plan.rows || input.cols() != plan.cols ||
            input.depth() != plan.depth || input.dtype() != plan.dtype)
            fail_parameter("input grid does not match the plan's shape/dtype");
        result_.output = input; // halo rows/cols keep the input values
        build();
    }

    SimResult run() {
        for (auto& r : readers_) reader_step(r);
        for (auto& s : stages_) stage_begin_segment(s);
        for (auto& g : gathers_) gather_step(g);
        for (auto& w : writers_) writer_step(w);
        drain();
        finalize();
        return std::move(result_);
    }

private:
    // --- engine ---
    void at(int64_t time, std::function<void()> fn) {
        queue_.push({time, seq_++, std::move(fn)});
    }

    void wait_on(int fifo, std::function<bool()> ready, std::function<void()> resume,
                 std::string who, std::string what) {
        fifos_[fifo].waiters.push_back(
            {std::move(ready), std::move(resume), std::move(who), std::move(what)});
    }

    void kick(int fifo) {
        auto& ws = fifos_[fifo].waiters;
        std::vector<Waiter> still;
        for (auto& w : ws) {
            if (w.ready())
                at(now_, w.resume);
            else
                still.push_back(std::move(w));
        }
        ws = std::move(still);
    }

    void drain() {
        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            end_ = std::max(end_, now_);
            ev.fn();
        }
        if (finished_ < total_procs_) report_deadlock();
    }

    [[noreturn]] void report_deadlock() {
        std::string msg = "dataflow deadlock: ";
        bool first = true;
        for (const auto& f : fifos_)
            for (const auto& w : f.waiters) {
                if (!first) msg += "; ";
                first = false;
                msg += w.who + " waiting on fifo '" + f.rt.spec().name + "' (" + w.what + ")";
            }
        if (first) msg += "no registered waiters (internal scheduling bug)";
        fail_deadlock(msg);
    }

    void finish_proc() { ++finished_; }

    // --- construction ---
    void build() {
        for (const auto& spec : plan_.fifos) {
            fifos_.emplace_back(spec, plan_, opts_.trace_fifos);
            SimFifo& f = fifos_.back();
            f.row_cycles = link_row_cycles(fabric_, spec.link, spec.slot_bytes,
                                           spec.slot_values);
            f.stat.fifo = spec.name;
            f.stat.link = spec.link;
            if (spec.link == LinkKind::ShimRead || spec.link == LinkKind::ShimWrite)
                f.channel = &channels_[{spec.shim, spec.channel,
                                        spec.link == LinkKind::ShimRead ? 1 : 0}];
        }
        cores_.resize(plan_.slots.size());

        const int R = plan_.rows;
        const bool hdiff = plan_.kernel == "hdiff";
        const StencilSpec* espec = hdiff ? nullptr : &stencil_spec(plan_.kernel);
        const bool row_dealt = !hdiff && espec->row_halo == 0; // 1-d kernel deals rows

        // Stage processes.
        for (const auto& slot : plan_.slots) {
            StageProc p;
            p.slot = slot.id;
            p.role = slot.role;
            bind_fifos(p);
            RoleWork work =
                hdiff ? role_work_hdiff(slot.role, plan_.cols - 4)
                      : role_work_elementary(*espec, plan_.cols - 2 * espec->col_halo);
            if (p.aux_fifo >= 0 &&
                fifos_[p.aux_fifo].rt.spec().link == LinkKind::Cascade)
                work.cascade_recv_values += fifos_[p.aux_fifo].rt.spec().slot_values;
            p.occupancy = row_occupancy_cycles(fabric_, work, plan_.dtype);

            const auto planes = owned_planes(slot.block);
            if (hdiff) {
                for (int d : planes) {
                    Segment s;
                    s.psi_pushes = R;
                    for (int r = 2; r <= R - 3; ++r)
                        if ((r - 2) % plan_.lanes == slot.lane) s.items.push_back({d, r});
                    p.segments.push_back(std::move(s));
                }
            } else if (!row_dealt) {
                for (int d : planes) {
                    Segment s;
                    s.psi_pushes = R;
                    for (int r = espec->row_halo; r <= R - 1 - espec->row_halo; ++r)
                        s.items.push_back({d, r});
                    p.segments.push_back(std::move(s));
                }
            } else {
                Segment s; // one flat segment of round-robin rows
                for (int d = 0; d < plan_.depth; ++d)
                    for (int r = 0; r < R; ++r)
                        if ((static_cast<int64_t>(d) * R + r) % plan_.blocks == slot.block)
                            s.items.push_back({d, r});
                s.psi_pushes = static_cast<int64_t>(s.items.size());
                if (!s.items.empty()) p.segments.push_back(std::move(s));
            }
            stages_.push_back(std::move(p));
        }

        // Gather processes.
        for (int gslot : plan_.gather_slots) {
            GatherProc g;
            g.slot = gslot;
            g.lane_fifos.assign(plan_.lanes, -1);
            for (std::size_t i = 0; i < plan_.fifos.size(); ++i) {
                const auto& f = plan_.fifos[i];
                if (f.producer_slot < 0) continue;
                const CoreSlot& prod = plan_.slots[f.producer_slot];
                if (prod.role != Role::FluxNonMac) continue;
                for (const auto& c : f.consumers)
                    if (c.slot == gslot) g.lane_fifos[prod.lane] = static_cast<int>(i);
            }
            for (std::size_t i = 0; i < plan_.fifos.size(); ++i)
                if (plan_.fifos[i].link == LinkKind::ShimWrite &&
                    plan_.fifos[i].producer_slot == gslot)
                    g.out_fifo = static_cast<int>(i);
            g.copy_cycles = static_cast<int64_t>(
                std::ceil(static_cast<double>(plan_.cols) * fabric_.datapath.elem_bits /
                          fabric_.datapath.load_bits_per_cycle));
            const int block = plan_.slots[gslot].block;
            for (int d : owned_planes(block))
                for (int r = 2; r <= R - 3; ++r) g.items.push_back({d, r});
            gathers_.push_back(std::move(g));
        }

        // Readers and writers.
        for (std::size_t i = 0; i < plan_.fifos.size(); ++i) {
            const auto& spec = plan_.fifos[i];
            if (spec.link == LinkKind::ShimRead) {
                ReaderProc r;
                r.fifo = static_cast<int>(i);
                const int block = plan_.slots[spec.consumers.front().slot].block;
                if (hdiff || !row_dealt) {
                    for (int d : owned_planes(block))
                        for (int row = 0; row < R; ++row) r.rows.push_back({d, row});
                } else {
                    for (int d = 0; d < plan_.depth; ++d)
                        for (int row = 0; row < R; ++row)
                            if ((static_cast<int64_t>(d) * R + row) % plan_.blocks == block)
                                r.rows.push_back({d, row});
                }
                // One delivery process per destination ring: each consumer's
                // DMA pulls at its own pace from the shim.
                for (int g = 0; g < fifos_[i].rt.group_count(); ++g) {
                    r.group = g;
                    readers_.push_back(r);
                }
            } else if (spec.link == LinkKind::ShimWrite) {
                WriterProc w;
                w.fifo = static_cast<int>(i);
                const int block = plan_.slots[spec.producer_slot].block;
                int64_t per_plane;
                if (hdiff)
                    per_plane = R - 4;
                else if (!row_dealt)
                    per_plane = R - 2 * espec->row_halo;
                else
                    per_plane = -1;
                if (per_plane >= 0)
                    w.expected = per_plane * static_cast<int64_t>(owned_planes(block).size());
                else {
                    int64_t units = 0;
                    for (int d = 0; d < plan_.depth; ++d)
                        for (int row = 0; row < R; ++row)
                            if ((static_cast<int64_t>(d) * R + row) % plan_.blocks == block)
                                ++units;
                    w.expected = units;
                }
                writers_.push_back(std::move(w));
            }
        }

        total_procs_ = static_cast<int>(stages_.size() + gathers_.size() + readers_.size() +
                                        writers_.size());
    }

    std::vector<int> owned_planes(int block) const {
        std::vector<int> planes;
        for (int d = 0; d < plan_.depth; ++d)
            if (d % plan_.blocks == block) planes.push_back(d);
        return planes;
    }

    void bind_fifos(StageProc& p) {
        const bool is_gather =
            std::find(plan_.gather_slots.begin(), plan_.gather_slots.end(), p.slot) !=
            plan_.gather_slots.end();
        for (std::size_t i = 0; i < plan_.fifos.size(); ++i) {
            const auto& f = plan_.fifos[i];
            for (std::size_t ci = 0; ci < f.consumers.size(); ++ci) {
                const auto& c = f.consumers[ci];
                if (c.slot != p.slot) continue;
                if (f.link == LinkKind::ShimRead) {
                    p.psi_fifo = static_cast<int>(i);
                    p.psi_cons = static_cast<int>(ci);
                    p.psi_window = c.window;
                    p.psi_step = c.step;
                    p.psi_offset = c.offset;
                } else if (f.producer_slot >= 0) {
                    const Role prod = plan_.slots[f.producer_slot].role;
                    if (prod == Role::Lap || prod == Role::FluxMac) {
                        p.aux_fifo = static_cast<int>(i);
                        p.aux_cons = static_cast<int>(ci);
                    }
                    // FluxNonMac producers feed the gather process, not a stage.
                }
            }
            if (f.producer_slot == p.slot) {
                if (f.link == LinkKind::ShimWrite && is_gather) continue; // gather's own
                p.out_fifo = static_cast<int>(i);
                if (f.consumers.size() == 1 && f.consumers[0].slot == p.slot)
                    p.out_kind = OutKind::SelfLocal;
                else if (f.link == LinkKind::ShimWrite)
                    p.out_kind = OutKind::Shim;
                else
                    p.out_kind = OutKind::Linked;
            }
        }
    }

    // --- transfer pump: moves finished rows over a core-to-core link ---
    void pump(int fi) {
        SimFifo& f = fifos_[fi];
        if (f.pumping || f.pending.empty()) return;
        if (!f.rt.can_reserve()) {
            if (f.pump_waiting) return;
            f.pump_waiting = true;
            wait_on(fi, [&f] { return f.rt.can_reserve(); },
                    [this, fi] {
                        fifos_[fi].pump_waiting = false;
                        pump(fi);
                    },
                    "transfer of fifo '" + f.rt.spec().name + "'",
                    "a free ring slot downstream");
            return;
        }
        f.rt.reserve();
        PayloadPtr payload = f.pending.front();
        f.pending.pop_front();
        Resource& res = f.channel ? *f.channel : f.link;
        const Booking bk = book(res, now_, f.row_cycles);
        record_transfer(f, bk);
        f.pumping = true;
        at(bk.end, [this, fi, payload] {
            SimFifo& g = fifos_[fi];
            g.pumping = false;
            g.rt.push(payload);
            ++g.staging_free;
            kick(fi);
            pump(fi);
        });
    }

    // --- reader process ---
    void reader_step(ReaderProc& r) {
        if (r.idx >= r.rows.size()) {
            if (!r.done) {
                r.done = true;
                finish_proc();
            }
            return;
        }
        SimFifo& f = fifos_[r.fifo];
        const int group = r.group;
        if (!f.rt.can_reserve(group)) {
            wait_on(r.fifo, [&f, group] { return f.rt.can_reserve(group); },
                    [this, &r] { reader_step(r); }, "shim reader",
                    "a free ring slot to push into");
            return;
        }
        f.rt.reserve(group);
        const auto [plane, row] = r.rows[r.idx++];
        const Booking bk = book(*f.channel, now_, f.row_cycles);
        if (group == 0) record_transfer(f, bk); // one channel transfer feeds all rings
        auto payload = std::make_shared<RowPayload>();
        payload->plane = plane;
        payload->row = row;
        if (plan_.dtype == DType::I32)
            payload->psi_i.assign(input_.i32_row(row, plane),
                                  input_.i32_row(row, plane) + plan_.cols);
        else
            payload->psi_f.assign(input_.f32_row(row, plane),
                                  input_.f32_row(row, plane) + plan_.cols);
        const int fifo = r.fifo;
        at(bk.end, [this, fifo, group, payload] {
            fifos_[fifo].rt.push(group, payload);
            kick(fifo);
        });
        at(bk.end, [this, &r] { reader_step(r); });
    }

    // --- stage process ---
    std::string stage_name(const StageProc& p) const {
        return std::string(role_name(p.role)) + " core " + std::to_string(p.slot);
    }

    void stage_begin_segment(StageProc& p) {
        if (p.seg >= p.segments.size()) {
            if (!p.done) {
                p.done = true;
                finish_proc();
            }
            return;
        }
        p.item = 0;
        if (p.psi_fifo < 0) {
            stage_try_aux(p);
            return;
        }
        SimFifo& f = fifos_[p.psi_fifo];
        p.psi_seg_base = f.rt.released(p.psi_cons);
        if (p.psi_offset > 0) {
            stage_begin_segment_release(p);
            return;
        }
        stage_try_psi(p);
    }

    void stage_begin_segment_release(StageProc& p) {
        SimFifo& f = fifos_[p.psi_fifo];
        if (!f.rt.can_release(p.psi_cons, p.psi_offset)) {
            wait_on(p.psi_fifo,
                    [&f, &p] { return f.rt.can_release(p.psi_cons, p.psi_offset); },
                    [this, &p] { stage_begin_segment_release(p); }, stage_name(p),
                    "input rows to skip to the lane offset");
            return;
        }
        f.rt.release(p.psi_cons, p.psi_offset);
        kick(p.psi_fifo);
        stage_try_psi(p);
    }

    void stage_try_psi(StageProc& p) {
        if (p.item >= p.segments[p.seg].items.size()) {
            stage_end_segment(p);
            return;
        }
        SimFifo& f = fifos_[p.psi_fifo];
        if (!f.rt.can_acquire(p.psi_cons, p.psi_window)) {
            wait_on(p.psi_fifo, [&f, &p] { return f.rt.can_acquire(p.psi_cons, p.psi_window); },
                    [this, &p] { stage_try_psi(p); }, stage_name(p),
                    "a full input window of " + std::to_string(p.psi_window) + " rows");
            return;
        }
        f.rt.acquire(p.psi_cons, p.psi_window);
        stage_try_aux(p);
    }

    void stage_try_aux(StageProc& p) {
        if (p.item >= p.segments[p.seg].items.size()) { // psi-less stage at segment end
            stage_end_segment(p);
            return;
        }
        if (p.aux_fifo < 0) {
            stage_try_out(p);
            return;
        }
        SimFifo& f = fifos_[p.aux_fifo];
        if (!f.rt.can_acquire(p.aux_cons, 1)) {
            wait_on(p.aux_fifo, [&f, &p] { return f.rt.can_acquire(p.aux_cons, 1); },
                    [this, &p] { stage_try_aux(p); }, stage_name(p), "an upstream result row");
            return;
        }
        f.rt.acquire(p.aux_cons, 1);
        stage_try_out(p);
    }

    void stage_try_out(StageProc& p) {
        if (p.out_fifo < 0) {
            stage_compute(p);
            return;
        }
        SimFifo& f = fifos_[p.out_fifo];
        if (p.out_kind == OutKind::Linked) {
            if (f.staging_free <= 0) {
                wait_on(p.out_fifo, [&f] { return f.staging_free > 0; },
                        [this, &p] { stage_try_out(p); }, stage_name(p),
                        "a free producer staging buffer");
                return;
            }
            --f.staging_free;
        } else {
            if (!f.rt.can_reserve()) {
                wait_on(p.out_fifo, [&f] { return f.rt.can_reserve(); },
                        [this, &p] { stage_try_out(p); }, stage_name(p),
                        "a free output ring slot");
                return;
            }
            f.rt.reserve();
        }
        stage_compute(p);
    }

    void stage_compute(StageProc& p) {
        const Booking bk = book(cores_[p.slot], now_, p.occupancy);
        at(bk.end, [this, &p] { stage_finish(p); });
    }

    void stage_finish(StageProc& p) {
        const auto [plane, row] = p.segments[p.seg].items[p.item];
        std::vector<const RowPayload*> psi;
        if (p.psi_fifo >= 0)
            for (int k = 0; k < p.psi_window; ++k)
                psi.push_back(fifos_[p.psi_fifo].rt.slot(p.psi_cons, k).get());
        const RowPayload* aux =
            p.aux_fifo >= 0 ? fifos_[p.aux_fifo].rt.slot(p.aux_cons, 0).get() : nullptr;
        auto payload =
            std::make_shared<RowPayload>(compute_stage_row(plan_, p.role, psi, aux, plane, row));
        ++rows_by_slot_[p.slot];

        if (p.out_fifo >= 0) {
            SimFifo& out = fifos_[p.out_fifo];
            if (p.out_kind == OutKind::Linked) {
                out.pending.push_back(std::move(payload));
                pump(p.out_fifo);
            } else {
                out.rt.push(std::move(payload));
                kick(p.out_fifo);
            }
        }
        stage_release(p);
    }

    void stage_release(StageProc& p) {
        if (p.aux_fifo >= 0) {
            fifos_[p.aux_fifo].rt.release(p.aux_cons, 1);
            kick(p.aux_fifo);
        }
        if (p.psi_fifo < 0) {
            ++p.item;
            stage_try_aux(p);
            return;
        }
        stage_release_psi(p);
    }

    void stage_release_psi(StageProc& p) {
        SimFifo& f = fifos_[p.psi_fifo];
        if (!f.rt.can_release(p.psi_cons, p.psi_step)) {
            wait_on(p.psi_fifo, [&f, &p] { return f.rt.can_release(p.psi_cons, p.psi_step); },
                    [this, &p] { stage_release_psi(p); }, stage_name(p),
                    "pushed rows to slide the window over");
            return;
        }
        f.rt.release(p.psi_cons, p.psi_step);
        kick(p.psi_fifo);
        ++p.item;
        stage_try_psi(p);
    }

    void stage_end_segment(StageProc& p) {
        if (p.psi_fifo < 0) {
            ++p.seg;
            stage_begin_segment(p);
            return;
        }
        SimFifo& f = fifos_[p.psi_fifo];
        const int64_t target = p.psi_seg_base + p.segments[p.seg].psi_pushes;
        const int64_t remaining = target - f.rt.released(p.psi_cons);
        if (remaining > 0 && !f.rt.can_release(p.psi_cons, static_cast<int>(remaining))) {
            wait_on(p.psi_fifo,
                    [&f, &p, remaining] {
                        return f.rt.can_release(p.psi_cons, static_cast<int>(remaining));
                    },
                    [this, &p] { stage_end_segment(p); }, stage_name(p),
                    "plane tail rows to retire");
            return;
        }
        if (remaining > 0) {
            f.rt.release(p.psi_cons, static_cast<int>(remaining));
            kick(p.psi_fifo);
        }
        ++p.seg;
        stage_begin_segment(p);
    }

    // --- gather process ---
    void gather_step(GatherProc& g) {
        if (g.item >= g.items.size()) {
            if (!g.done) {
                g.done = true;
                finish_proc();
            }
            return;
        }
        const int row = g.items[g.item].second;
        const int lane = (row - 2) % plan_.lanes;
        const int in_fifo = g.lane_fifos[lane];
        SimFifo& in = fifos_[in_fifo];
        const int cons = consumer_index(in_fifo, g.slot);
        if (!in.rt.can_acquire(cons, 1)) {
            wait_on(in_fifo, [&in, cons] { return in.rt.can_acquire(cons, 1); },
                    [this, &g] { gather_step(g); }, "gather core " + std::to_string(g.slot),
                    "the next lane-ordered output row");
            return;
        }
        in.rt.acquire(cons, 1);
        gather_try_out(g);
    }

    void gather_try_out(GatherProc& g) {
        SimFifo& out = fifos_[g.out_fifo];
        if (!out.rt.can_reserve()) {
            wait_on(g.out_fifo, [&out] { return out.rt.can_reserve(); },
                    [this, &g] { gather_try_out(g); }, "gather core " + std::to_string(g.slot),
                    "a free output ring slot");
            return;
        }
        out.rt.reserve();
        const Booking bk = book(cores_[g.slot], now_, g.copy_cycles);
        at(bk.end, [this, &g] { gather_finish(g); });
    }

    void gather_finish(GatherProc& g) {
        const int row = g.items[g.item].second;
        const int lane = (row - 2) % plan_.lanes;
        const int in_fifo = g.lane_fifos[lane];
        SimFifo& in = fifos_[in_fifo];
        const int cons = consumer_index(in_fifo, g.slot);
        PayloadPtr payload = in.rt.slot(cons, 0);
        fifos_[g.out_fifo].rt.push(std::move(payload));
        kick(g.out_fifo);
        in.rt.release(cons, 1);
        kick(in_fifo);
        ++g.item;
        gather_step(g);
    }

    // --- writer process ---
    void writer_step(WriterProc& w) {
        if (w.handled >= w.expected) {
            if (!w.done) {
                w.done = true;
                finish_proc();
            }
            return;
        }
        SimFifo& f = fifos_[w.fifo];
        if (!f.rt.can_acquire(0, 1)) {
            wait_on(w.fifo, [&f] { return f.rt.can_acquire(0, 1); },
                    [this, &w] { writer_step(w); }, "shim writer", "a finished output row");
            return;
        }
        f.rt.acquire(0, 1);
        const Booking bk = book(*f.channel, now_, f.row_cycles);
        record_transfer(f, bk);
        PayloadPtr payload = f.rt.slot(0, 0);
        at(bk.end, [this, &w, payload, end = bk.end] {
            if (plan_.dtype == DType::I32)
                std::copy(payload->psi_i.begin(), payload->psi_i.end(),
                          result_.output.i32_row(payload->row, payload->plane));
            else
                std::copy(payload->psi_f.begin(), payload->psi_f.end(),
                          result_.output.f32_row(payload->row, payload->plane));
            completions_.push_back(end);
            ++w.handled;
            fifos_[w.fifo].rt.release(0, 1);
            kick(w.fifo);
            writer_step(w);
        });
    }

    int consumer_index(int fifo, int slot) const {
        const auto& cons = plan_.fifos[fifo].consumers;
        for (std::size_t i = 0; i < cons.size(); ++i)
            if (cons[i].slot == slot) return static_cast<int>(i);
        fail_protocol("slot " + std::to_string(slot) + " is not a consumer of fifo '" +
                      plan_.fifos[fifo].name + "'");
    }

    void record_transfer(SimFifo& f, const Booking& bk) {
        ++f.stat.transfers;
        f.stat.bytes_moved += f.rt.spec().slot_bytes;
        const int fan = std::max(1, f.rt.materialized_consumers());
        f.stat.bytes_delivered += static_cast<int64_t>(f.rt.spec().slot_bytes) * fan;
        f.stat.busy_cycles += bk.end - bk.start;
    }

    void finalize() {
        result_.runtime_cycles = end_;
        for (const auto& slot : plan_.slots) {
            CoreStat cs;
            cs.slot = slot.id;
            cs.role = slot.role;
            cs.busy_cycles = cores_[slot.id].busy;
            cs.rows_computed = rows_by_slot_.count(slot.id) ? rows_by_slot_.at(slot.id) : 0;
            cs.utilization =
                end_ > 0 ? static_cast<double>(cs.busy_cycles) / static_cast<double>(end_) : 0.0;
            result_.cores.push_back(cs);
        }
        for (auto& f : fifos_) {
            if (f.rt.spec().link == LinkKind::ShimRead) result_.bytes_in += f.stat.bytes_moved;
            if (f.rt.spec().link == LinkKind::ShimWrite) result_.bytes_out += f.stat.bytes_moved;
            result_.links.push_back(f.stat);
            if (opts_.trace_fifos) result_.traces[f.rt.spec().name] = f.rt.trace();
        }
        result_.rows_written = static_cast<int64_t>(completions_.size());
        std::sort(completions_.begin(), completions_.end());
        std::vector<int64_t> deltas;
        for (std::size_t i = 1; i < completions_.size(); ++i)
            deltas.push_back(completions_[i] - completions_[i - 1]);
        if (!deltas.empty()) {
            std::sort(deltas.begin(), deltas.end());
            result_.steady_row_period = static_cast<double>(deltas[deltas.size() / 2]);
        }
    }

    const Grid3& input_;
    MappingPlan plan_;
    FabricSpec fabric_;
    SimOptions opts_;
    SimResult result_;

    std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
    uint64_t seq_ = 0;
    int64_t now_ = 0;
    int64_t end_ = 0;

    std::deque<SimFifo> fifos_;
    std::vector<Resource> cores_;
    std::map<std::array<int, 3>, Resource> channels_;
    std::deque<StageProc> stages_;
    std::deque<GatherProc> gathers_;
    std::deque<ReaderProc> readers_;
    std::deque<WriterProc> writers_;
    std::map<int, int64_t> rows_by_slot_;
    std::vector<int64_t> completions_;
    int total_procs_ = 0;
    int finished_ = 0;
};

} // namespace

SimResult simulate(const Grid3& input, const MappingPlan& plan, const FabricSpec& fabric,
                   const SimOptions& opts) {
    Sim sim(input, plan, fabric, opts);
    return sim.run();
}

} // namespace stencilfab
