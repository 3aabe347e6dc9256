#pragma once
/// @file object_fifo.hpp
/// @brief Runtime state of one object FIFO: a bounded multi-consumer ring.
///
/// Slots are numbered globally from 0 in push order. Each consumer keeps a
/// released cursor; acquire(count) succeeds once slots
/// [released, released+count) have all been pushed, and release(count)
/// advances the cursor. A slot is reclaimed when every consumer has released
/// it; producers reserve capacity before filling a slot and push when the
/// fill completes, so pushed + reserved - min(released) never exceeds the
/// ring depth. Misuse (over-release, premature acquire, push without
/// reserve) throws protocol errors; waiting/waking is the simulator's job —
/// this class is pure state.
///
/// The optional trace records the acquire/release/reserve/push sequence so
/// tests can replay the expected discipline verbatim.

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "stencilfab/hdiff.hpp"
#include "stencilfab/plan.hpp"

namespace stencilfab {

/// One row-sized payload traveling through a FIFO. Only the fields a stage
/// produced are populated; values are carried at full precision (quantization
/// mid-pipeline is a timing effect, applied once at the final store).
struct RowPayload {
    int plane = -1; ///< grid plane index
    int row = -1;   ///< global grid row index
    std::vector<int32_t> psi_i;
    std::vector<float> psi_f;
    LapBundle<int64_t> lap_i;
    LapBundle<double> lap_f;
    FluxBundle<int128> flux_i;
    FluxBundle<double> flux_f;
};
using PayloadPtr = std::shared_ptr<const RowPayload>;

struct FifoTraceEvent {
    enum class Op { Acquire, Release, Reserve, Push };
    Op op;
    int consumer = -1; ///< consumer index, -1 for producer ops
    int count = 0;
};
const char* fifo_op_name(FifoTraceEvent::Op op);

class ObjectFifoRuntime {
public:
    ObjectFifoRuntime(const ObjectFifoSpec& spec, bool trace_enabled);

    const ObjectFifoSpec& spec() const { return spec_; }

    // --- consumer side (index into spec().consumers) ---
    bool can_acquire(int consumer, int count) const;
    void acquire(int consumer, int count);
    /// idx-th slot of the current window (slot number released(consumer)+idx).
    const PayloadPtr& slot(int consumer, int idx) const;
    bool can_release(int consumer, int count) const;
    void release(int consumer, int count);
    int64_t released(int consumer) const;

    // --- producer side ---
    bool can_reserve() const;
    void reserve();
    void push(PayloadPtr payload);

    int64_t pushes() const { return pushed_; }
    int materialized_consumers() const;
    const std::vector<FifoTraceEvent>& trace() const { return trace_; }

private:
    int64_t min_released() const;
    void reclaim();

    ObjectFifoSpec spec_;
    bool trace_enabled_ = false;
    std::deque<PayloadPtr> slots_; ///< slots_[i] holds slot number base_ + i
    int64_t base_ = 0;
    int64_t pushed_ = 0;
    int64_t reserved_ = 0;
    std::vector<int64_t> released_;
    std::vector<int64_t> acquired_;
    std::vector<FifoTraceEvent> trace_;
};

} // namespace stencilfab
