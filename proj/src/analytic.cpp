#include "stencilfab/analytic.hpp"

#include "stencilfab/errors.hpp"

namespace stencilfab {

void validate_datapath(const DatapathSpec& dp) {
    if (dp.macs_per_cycle < 1 || dp.nonmac_per_cycle < 1 || dp.load_bits_per_cycle < 1 ||
        dp.elem_bits < 1)
        fail_parameter("datapath rates must all be positive");
}

const char* balance_name(Balance b) {
    switch (b) {
        case Balance::ComputeBound: return "compute-bound";
        case Balance::MemoryBound: return "memory-bound";
        case Balance::Balanced: return "balanced";
    }
    return "?";
}

int64_t hdiff_interior_cells(int rows, int cols, int depth) {
    if (rows < 4 || cols < 4 || depth < 1)
        fail_parameter("analytic model needs rows, cols >= 4 and depth >= 1");
    return static_cast<int64_t>(rows - 4) * (cols - 4) * depth;
}

double lap_comp_cycles(int rows, int cols, int depth, const DatapathSpec& dp) {
    validate_datapath(dp);
    const double i = static_cast<double>(hdiff_interior_cells(rows, cols, depth));
    return 25.0 * i / dp.macs_per_cycle;
}

FluxCompTerms flx_comp_cycles(int rows, int cols, int depth, const DatapathSpec& dp) {
    validate_datapath(dp);
    const double i = static_cast<double>(hdiff_interior_cells(rows, cols, depth));
    FluxCompTerms t;
    t.mac = 2.0 * i * 4.0 / dp.macs_per_cycle;    // 2 MACs per flux pair, 4 pairs
    t.nonmac = 3.0 * i * 4.0 / dp.macs_per_cycle; // test + select + combine, 4 pairs
    return t;
}

double hdiff_comp_cycles(int rows, int cols, int depth, const DatapathSpec& dp) {
    return lap_comp_cycles(rows, cols, depth, dp) +
           flx_comp_cycles(rows, cols, depth, dp).total();
}

double lap_mem_cycles(int rows, int cols, int depth, const DatapathSpec& dp) {
    validate_datapath(dp);
    const double i = static_cast<double>(hdiff_interior_cells(rows, cols, depth));
    return 25.0 * i * dp.elem_bits / dp.load_bits_per_cycle;
}

double flx_mem_cycles(int rows, int cols, int depth, const DatapathSpec& dp) {
    validate_datapath(dp);
    const double i = static_cast<double>(hdiff_interior_cells(rows, cols, depth));
    return 8.0 * i * dp.elem_bits / dp.load_bits_per_cycle;
}

double hdiff_mem_cycles(int rows, int cols, int depth, const DatapathSpec& dp) {
    return lap_mem_cycles(rows, cols, depth, dp) + flx_mem_cycles(rows, cols, depth, dp);
}

Balance classify_balance(double comp_cycles, double mem_cycles) {
    if (mem_cycles <= 0.0) return Balance::Balanced;
    const double ratio = comp_cycles / mem_cycles;
    if (ratio > 1.1) return Balance::ComputeBound;
    if (ratio < 0.9) return Balance::MemoryBound;
    return Balance::Balanced;
}

AnalyticReport analyze_hdiff(int rows, int cols, int depth, const DatapathSpec& dp) {
    AnalyticReport rep;
    rep.rows = rows;
    rep.cols = cols;
    rep.depth = depth;
    rep.datapath = dp;
    rep.interior_cells = hdiff_interior_cells(rows, cols, depth);
    rep.has_interior = rep.interior_cells > 0;
    rep.lap_comp = lap_comp_cycles(rows, cols, depth, dp);
    const FluxCompTerms t = flx_comp_cycles(rows, cols, depth, dp);
    rep.flx_comp_mac = t.mac;
    rep.flx_comp_nonmac = t.nonmac;
    rep.flx_comp = t.total();
    rep.hdiff_comp = rep.lap_comp + rep.flx_comp;
    rep.lap_mem = lap_mem_cycles(rows, cols, depth, dp);
    rep.flx_mem = flx_mem_cycles(rows, cols, depth, dp);
    rep.hdiff_mem = rep.lap_mem + rep.flx_mem;
    rep.comp_mem_ratio = rep.hdiff_mem > 0.0 ? rep.hdiff_comp / rep.hdiff_mem : 0.0;
    rep.balance = classify_balance(rep.hdiff_comp, rep.hdiff_mem);
    return rep;
}

nlohmann::ordered_json analytic_report_json(const AnalyticReport& rep) {
    nlohmann::ordered_json j;
    j["grid"] = {{"rows", rep.rows}, {"cols", rep.cols}, {"depth", rep.depth}};
    j["datapath"] = {{"macs_per_cycle", rep.datapath.macs_per_cycle},
                     {"nonmac_per_cycle", rep.datapath.nonmac_per_cycle},
                     {"load_bits_per_cycle", rep.datapath.load_bits_per_cycle},
                     {"elem_bits", rep.datapath.elem_bits}};
    j["interior_cells"] = rep.interior_cells;
    j["cycles"] = {{"lap_comp", rep.lap_comp},
                   {"flx_comp_mac", rep.flx_comp_mac},
                   {"flx_comp_nonmac", rep.flx_comp_nonmac},
                   {"flx_comp", rep.flx_comp},
                   {"hdiff_comp", rep.hdiff_comp},
                   {"lap_mem", rep.lap_mem},
                   {"flx_mem", rep.flx_mem},
                   {"hdiff_mem", rep.hdiff_mem}};
    j["comp_mem_ratio"] = rep.comp_mem_ratio;
    j["balance"] = balance_name(rep.balance);
    if (!rep.has_interior) j["warning"] = "grid has no interior cells";
    return j;
}

} // namespace stencilfab
