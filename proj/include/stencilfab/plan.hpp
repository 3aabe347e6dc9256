#pragma once
/// @file plan.hpp
/// @brief Mapping plans: which cores run which kernel stage, and the object
///        FIFOs that connect them.
///
/// A plan is a placed dataflow graph. Core slots carry a stage role and a
/// (col, row) position on the array; object FIFOs carry row-sized slots from
/// one producer to one or more consumers over a specific link kind. Consumers
/// declare their sliding-window discipline (window/step/offset, in slots), so
/// the simulator can replay the exact acquire/release sequence and the
/// validator can bound ring occupancy.
///
/// Memory accounting convention: every materialized consumer owns a ring of
/// `depth` slots in its local memory; every producer (except over the cascade,
/// which is a register path) owns a 2-slot staging buffer so the next row can
/// be computed while the previous one drains. Direct-link consumers are
/// materialized (the producer neighbor-writes into their ring) unless marked
/// via_neighbor, in which case they read an adjacent consumer's ring in place.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "stencilfab/fabric.hpp"
#include "stencilfab/grid.hpp"

namespace stencilfab {

/// What a core computes per output row.
enum class Role {
    Mono,       ///< whole kernel on one core
    Lap,        ///< Laplacian-stage producer
    FluxMac,    ///< flux multiply stage (candidates + keep masks)
    FluxNonMac, ///< flux limiter/combine/store stage
    FluxMixed,  ///< FluxMac and FluxNonMac fused on one core
    Elementary  ///< one elementary stencil, whole kernel per core
};

const char* role_name(Role r);
Role role_from_name(const std::string& name);

struct CoreSlot {
    int id = 0;  ///< index into MappingPlan::slots
    int col = 0; ///< array column
    int row = 0; ///< array row
    Role role = Role::Mono;
    int lane = 0;  ///< row-interleave index within a block
    int block = 0; ///< scale-out block index
};

/// One consumer endpoint of a FIFO.
struct FifoConsumerSpec {
    int slot = -1;             ///< consuming core slot id; -1 = external (shim write)
    bool via_neighbor = false; ///< reads an adjacent materialized consumer's ring
    int window = 1;            ///< slots held while computing one row
    int step = 1;              ///< slots released per iteration
    int offset = 0;            ///< index of the first slot this consumer uses
};

struct ObjectFifoSpec {
    std::string name;
    LinkKind link = LinkKind::Direct;
    int producer_slot = -1; ///< producing core slot id; -1 = shim read
    std::vector<FifoConsumerSpec> consumers;
    int depth = 2;       ///< ring slots per materialized consumer
    int slot_bytes = 0;  ///< modeled bytes per slot (memory and link timing)
    int slot_values = 0; ///< payload values per slot (cascade timing)
    int shim = -1;       ///< shim tile for ShimRead/ShimWrite
    int channel = -1;    ///< channel index on that shim
};

struct MappingPlan {
    std::string design; ///< canonical design string this plan was built from
    std::string kernel; ///< "hdiff" or an elementary stencil name
    DType dtype = DType::I32;
    int rows = 0, cols = 0, depth = 0; ///< grid shape the plan is bound to
    double coeff = 1.0;                ///< hdiff scalar coefficient
    int srs_shift = 0;
    bool no_limiter = false;
    int lanes = 1;  ///< row interleave within a block
    int blocks = 1; ///< plane-parallel block count
    std::vector<int> gather_slots; ///< slots that reorder lane outputs (one per block)
    std::vector<CoreSlot> slots;
    std::vector<ObjectFifoSpec> fifos;
};

/// DMA channel uses of one slot, counted per direction. Only stream and shim
/// endpoints consume DMA channels; neighbor and cascade traffic does not.
struct DmaUsage {
    int in_uses = 0;
    int out_uses = 0;
};
DmaUsage dma_usage(const MappingPlan& plan, int slot_id);

/// Local-memory bytes the plan places on one slot (consumer rings plus
/// producer staging, per the convention above).
int64_t slot_memory_bytes(const MappingPlan& plan, int slot_id);

/// Structural validation: placement bounds and uniqueness, link adjacency,
/// ring/window consistency, per-direction DMA budgets, per-core memory
/// budgets, shim channel ranges, and work-division sanity. Throws a
/// validation error naming the first offending slot or FIFO.
void validate_plan(const MappingPlan& plan, const FabricSpec& fabric);

nlohmann::ordered_json plan_json(const MappingPlan& plan);
MappingPlan plan_from_json(const nlohmann::json& j);
MappingPlan load_plan(const std::string& path);
void save_plan(const MappingPlan& plan, const std::string& path);

} // namespace stencilfab
