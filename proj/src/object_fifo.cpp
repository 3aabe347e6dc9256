#include "stencilfab/object_fifo.hpp"

#include <algorithm>

#include "stencilfab/errors.hpp"

namespace stencilfab {

const char* fifo_op_name(FifoTraceEvent::Op op) {
    switch (op) {
        case FifoTraceEvent::Op::Acquire: return "acquire";
        case FifoTraceEvent::Op::Release: return "release";
        case FifoTraceEvent::Op::Reserve: return "reserve";
        case FifoTraceEvent::Op::Push: return "push";
    }
    return "?";
}

ObjectFifoRuntime::ObjectFifoRuntime(const ObjectFifoSpec& spec, bool trace_enabled)
    : spec_(spec),
      trace_enabled_(trace_enabled),
      released_(spec.consumers.size(), 0),
      acquired_(spec.consumers.size(), 0) {}

int64_t ObjectFifoRuntime::min_released() const {
    int64_t m = released_.empty() ? pushed_ : released_[0];
    for (int64_t r : released_) m = std::min(m, r);
    return m;
}

void ObjectFifoRuntime::reclaim() {
    const int64_t keep_from = min_released();
    while (base_ < keep_from && !slots_.empty()) {
        slots_.pop_front();
        ++base_;
    }
}

bool ObjectFifoRuntime::can_acquire(int consumer, int count) const {
    return pushed_ >= released_.at(consumer) + count;
}

void ObjectFifoRuntime::acquire(int consumer, int count) {
    if (count < 1) fail_protocol("fifo '" + spec_.name + "': acquire of " +
                                 std::to_string(count) + " slots");
    if (!can_acquire(consumer, count))
        fail_protocol("fifo '" + spec_.name + "': acquire of slots not yet pushed");
    acquired_.at(consumer) = released_.at(consumer) + count;
    if (trace_enabled_)
        trace_.push_back({FifoTraceEvent::Op::Acquire, consumer, count});
}

const PayloadPtr& ObjectFifoRuntime::slot(int consumer, int idx) const {
    const int64_t n = released_.at(consumer) + idx;
    if (idx < 0 || n >= acquired_.at(consumer))
        fail_protocol("fifo '" + spec_.name + "': access outside the acquired window");
    if (n < base_ || n >= base_ + static_cast<int64_t>(slots_.size()))
        fail_protocol("fifo '" + spec_.name + "': slot already reclaimed");
    return slots_[static_cast<std::size_t>(n - base_)];
}

bool ObjectFifoRuntime::can_release(int consumer, int count) const {
    return released_.at(consumer) + count <= pushed_;
}

void ObjectFifoRuntime::release(int consumer, int count) {
    if (count < 0) fail_protocol("fifo '" + spec_.name + "': negative release");
    if (count == 0) return;
    // Skipping never-acquired slots is legal (lane offsets, plane tails);
    // running past the pushed mark means more releases than data ever existed.
    if (!can_release(consumer, count))
        fail_protocol("fifo '" + spec_.name + "': over-release (release #" +
                      std::to_string(released_.at(consumer) + count) + " of " +
                      std::to_string(pushed_) + " pushed slots)");
    released_.at(consumer) += count;
    if (released_.at(consumer) > acquired_.at(consumer))
        acquired_.at(consumer) = released_.at(consumer);
    if (trace_enabled_)
        trace_.push_back({FifoTraceEvent::Op::Release, consumer, count});
    reclaim();
}

int64_t ObjectFifoRuntime::released(int consumer) const { return released_.at(consumer); }

bool ObjectFifoRuntime::can_reserve() const {
    return (pushed_ - min_released()) + reserved_ < spec_.depth;
}

void ObjectFifoRuntime::reserve() {
    if (!can_reserve())
        fail_protocol("fifo '" + spec_.name + "': reserve beyond ring capacity");
    ++reserved_;
    if (trace_enabled_) trace_.push_back({FifoTraceEvent::Op::Reserve, -1, 1});
}

void ObjectFifoRuntime::push(PayloadPtr payload) {
    if (reserved_ < 1)
        fail_protocol("fifo '" + spec_.name + "': push without a reserved slot");
    --reserved_;
    ++pushed_;
    slots_.push_back(std::move(payload));
    if (trace_enabled_) trace_.push_back({FifoTraceEvent::Op::Push, -1, 1});
}

int ObjectFifoRuntime::materialized_consumers() const {
    int n = 0;
    for (const auto& c : spec_.consumers)
        if (c.slot >= 0 && !c.via_neighbor && spec_.link != LinkKind::Cascade) ++n;
    return n;
}

} // namespace stencilfab
