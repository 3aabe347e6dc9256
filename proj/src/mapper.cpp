#include "stencilfab/mapper.hpp"

#include <cstdlib>

#include "stencilfab/elementary.hpp"
#include "stencilfab/errors.hpp"

namespace stencilfab {

DesignSpec parse_design(const std::string& text) {
    DesignSpec d;
    if (text == "single_i32") {
        d.family = DesignSpec::Family::Single;
        return d;
    }
    if (text == "single_f32") {
        d.family = DesignSpec::Family::Single;
        d.dtype = DType::F32;
        return d;
    }
    if (text == "dual_i32_direct" || text == "dual_i32_stream" || text == "dual_i32_cascade") {
        d.family = DesignSpec::Family::Dual;
        d.dual_link = text == "dual_i32_direct"   ? LinkKind::Direct
                      : text == "dual_i32_stream" ? LinkKind::Stream
                                                  : LinkKind::Cascade;
        return d;
    }
    if (text == "tri_i32_direct") {
        d.family = DesignSpec::Family::Tri;
        return d;
    }
    auto tail_int = [&](const std::string& head) -> int {
        const std::string arg = text.substr(head.size());
        if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos)
            fail_parameter("bad design parameter in '" + text + "'");
        return std::atoi(arg.c_str());
    };
    if (text.rfind("bblock:", 0) == 0) {
        d.family = DesignSpec::Family::BBlock;
        d.lanes = tail_int("bblock:");
        if (d.lanes < 1 || d.lanes > 4)
            fail_parameter("bblock lanes must lie in [1, 4] (gather routing budget)");
        return d;
    }
    if (text.rfind("scaleout:", 0) == 0) {
        d.family = DesignSpec::Family::ScaleOut;
        d.blocks = tail_int("scaleout:");
        d.lanes = 4;
        if (d.blocks < 1 || d.blocks > 32)
            fail_parameter("scaleout replicas must lie in [1, 32]");
        return d;
    }
    if (text.rfind("elem:", 0) == 0) {
        d.family = DesignSpec::Family::Elem;
        d.cores = tail_int("elem:");
        if (d.cores < 1 || d.cores > 32)
            fail_parameter("elem cores must lie in [1, 32]");
        return d;
    }
    fail_parameter("unknown design '" + text + "'");
}

std::vector<std::string> hdiff_design_names() {
    return {"single_f32",      "single_i32",      "dual_i32_cascade",
            "dual_i32_stream", "dual_i32_direct", "tri_i32_direct"};
}

namespace {

struct Builder {
    MappingPlan plan;
    int cols = 0;
    int width = 0; // interior width

    int add_slot(int col, int row, Role role, int lane, int block) {
        CoreSlot s;
        s.id = static_cast<int>(plan.slots.size());
        s.col = col;
        s.row = row;
        s.role = role;
        s.lane = lane;
        s.block = block;
        plan.slots.push_back(s);
        return s.id;
    }

    int psi_bytes() const { return cols * 4; }
    int lap_bytes() const { return 5 * width * 4; }
    int flux_bytes() const { return 24 * width; } // 4 candidate, 4 mask, 1 psi row

    ObjectFifoSpec& add_fifo(const std::string& name, LinkKind link, int producer,
                             int depth, int bytes, int values) {
        ObjectFifoSpec f;
        f.name = name;
        f.link = link;
        f.producer_slot = producer;
        f.depth = depth;
        f.slot_bytes = bytes;
        f.slot_values = values;
        plan.fifos.push_back(std::move(f));
        return plan.fifos.back();
    }

    static FifoConsumerSpec consumer(int slot, int window, int step, int offset,
                                     bool via_neighbor = false) {
        FifoConsumerSpec c;
        c.slot = slot;
        c.via_neighbor = via_neighbor;
        c.window = window;
        c.step = step;
        c.offset = offset;
        return c;
    }

    void add_shim_read(const std::string& name, int shim, int channel,
                       std::vector<FifoConsumerSpec> consumers, int depth) {
        auto& f = add_fifo(name, LinkKind::ShimRead, -1, depth, psi_bytes(), cols);
        f.shim = shim;
        f.channel = channel;
        f.consumers = std::move(consumers);
    }

    void add_shim_write(const std::string& name, int producer, int shim, int channel) {
        auto& f = add_fifo(name, LinkKind::ShimWrite, producer, 2, psi_bytes(), cols);
        f.shim = shim;
        f.channel = channel;
        f.consumers = {consumer(-1, 1, 1, 0)};
    }
};

// One tri pipeline (Laplacian -> flux MAC -> flux non-MAC) for lane `lane` of
// block `block`, placed on array row `row` starting at column `col_base`.
// Returns the slot ids {lap, mac, nonmac}.
std::array<int, 3> add_tri_lane(Builder& b, int col_base, int row, int lane, int block,
                                int lanes, const std::string& suffix) {
    const int lap = b.add_slot(col_base + 0, row, Role::Lap, lane, block);
    const int mac = b.add_slot(col_base + 1, row, Role::FluxMac, lane, block);
    const int non = b.add_slot(col_base + 2, row, Role::FluxNonMac, lane, block);
    auto& lapf = b.add_fifo("lap" + suffix, LinkKind::Direct, lap, 2, b.lap_bytes(),
                            5 * b.width);
    lapf.consumers = {Builder::consumer(mac, 1, 1, 0)};
    auto& fluxf = b.add_fifo("flux" + suffix, LinkKind::Direct, mac, 2, b.flux_bytes(),
                             9 * b.width);
    fluxf.consumers = {Builder::consumer(non, 1, 1, 0)};
    (void)lanes;
    return {lap, mac, non};
}

// One bblock: `lanes` tri pipelines sharing a broadcast input ring, plus a
// gather duty on the middle lane's non-MAC core. Shim `shim` carries channel
// `channel` in both directions.
void add_bblock(Builder& b, int lanes, int block, int col_base, int row_base, int shim,
                int channel, const std::string& suffix) {
    std::vector<std::array<int, 3>> lane_slots;
    std::vector<FifoConsumerSpec> psi_consumers;
    for (int k = 0; k < lanes; ++k) {
        const auto ids = add_tri_lane(b, col_base, row_base + k, k, block, lanes,
                                      suffix + "_l" + std::to_string(k));
        lane_slots.push_back(ids);
        psi_consumers.push_back(Builder::consumer(ids[0], 5, lanes, k));
        psi_consumers.push_back(Builder::consumer(ids[1], 3, lanes, k + 1, true));
    }
    b.add_shim_read("psi" + suffix, shim, channel, std::move(psi_consumers), lanes + 4);

    const int gather_lane = lanes / 2 < lanes ? lanes / 2 : lanes - 1;
    const int gather = lane_slots[gather_lane][2];
    b.plan.gather_slots.push_back(gather);
    for (int k = 0; k < lanes; ++k) {
        const int producer = lane_slots[k][2];
        const int dist = std::abs(k - gather_lane);
        const LinkKind link = dist <= 1 ? LinkKind::Direct : LinkKind::Stream;
        auto& f = b.add_fifo("laneout" + suffix + "_l" + std::to_string(k), link, producer,
                             2, b.psi_bytes(), b.cols);
        f.consumers = {Builder::consumer(gather, 1, 1, 0)};
    }
    b.add_shim_write("out" + suffix, gather, shim, channel);
}

} // namespace

MappingPlan build_plan(const std::string& design, const std::string& kernel, int rows,
                       int cols, int depth, const FabricSpec& fabric,
                       const BuildOptions& opts) {
    validate_fabric(fabric);
    const DesignSpec d = parse_design(design);
    const bool is_elem = d.family == DesignSpec::Family::Elem;
    if (is_elem == (kernel == "hdiff"))
        fail_parameter(is_elem ? "elem designs need an elementary kernel"
                               : "design '" + design + "' runs the hdiff kernel only");

    Builder b;
    b.cols = cols;
    b.plan.design = design;
    b.plan.kernel = kernel;
    b.plan.dtype = is_elem ? opts.elem_dtype : d.dtype;
    b.plan.rows = rows;
    b.plan.cols = cols;
    b.plan.depth = depth;
    b.plan.coeff = opts.coeff;
    b.plan.srs_shift = opts.srs_shift;
    b.plan.no_limiter = opts.no_limiter;

    if (!is_elem) {
        if (rows < 5 || cols < 5) fail_parameter("hdiff designs need rows, cols >= 5");
        b.width = cols - 4;
    } else {
        const StencilSpec& spec = stencil_spec(kernel);
        if (rows <= 2 * spec.row_halo || cols <= 2 * spec.col_halo)
            fail_parameter("grid too small for stencil '" + kernel + "'");
        b.width = cols - 2 * spec.col_halo;
    }

    switch (d.family) {
        case DesignSpec::Family::Single: {
            const int mono = b.add_slot(0, 0, Role::Mono, 0, 0);
            b.add_shim_read("psi", 0, 0, {Builder::consumer(mono, 5, 1, 0)}, 5);
            b.add_shim_write("out", mono, 0, 0);
            break;
        }
        case DesignSpec::Family::Dual: {
            const int lap = b.add_slot(0, 0, Role::Lap, 0, 0);
            const int mixed = b.add_slot(1, 0, Role::FluxMixed, 0, 0);
            b.add_shim_read("psi", 0, 0,
                            {Builder::consumer(lap, 5, 1, 0), Builder::consumer(mixed, 3, 1, 1)},
                            5);
            auto& lapf =
                b.add_fifo("lap", d.dual_link, lap, 2, b.lap_bytes(), 5 * b.width);
            lapf.consumers = {Builder::consumer(mixed, 1, 1, 0)};
            b.add_shim_write("out", mixed, 0, 0);
            break;
        }
        case DesignSpec::Family::Tri: {
            const auto ids = add_tri_lane(b, 0, 0, 0, 0, 1, "");
            b.add_shim_read("psi", 0, 0,
                            {Builder::consumer(ids[0], 5, 1, 0),
                             Builder::consumer(ids[1], 3, 1, 1)},
                            5);
            b.add_shim_write("out", ids[2], 0, 0);
            break;
        }
        case DesignSpec::Family::BBlock: {
            b.plan.lanes = d.lanes;
            add_bblock(b, d.lanes, 0, 0, 0, 0, 0, "");
            break;
        }
        case DesignSpec::Family::ScaleOut: {
            b.plan.lanes = 4;
            b.plan.blocks = d.blocks;
            for (int j = 0; j < d.blocks; ++j)
                add_bblock(b, 4, j, 3 * (j / 2), 4 * (j % 2), j / 2, j % 2,
                           "_b" + std::to_string(j));
            break;
        }
        case DesignSpec::Family::Elem: {
            const StencilSpec& spec = stencil_spec(kernel);
            b.plan.blocks = d.cores;
            const int window = spec.row_halo == 1 ? 3 : 1;
            for (int i = 0; i < d.cores; ++i) {
                const int slot = b.add_slot(i, 0, Role::Elementary, 0, i);
                const std::string sfx = "_c" + std::to_string(i);
                b.add_shim_read("psi" + sfx, i / 2, i % 2,
                                {Builder::consumer(slot, window, 1, 0)}, window);
                b.add_shim_write("out" + sfx, slot, i / 2, i % 2);
            }
            break;
        }
    }

    validate_plan(b.plan, fabric);
    return b.plan;
}

} // namespace stencilfab
