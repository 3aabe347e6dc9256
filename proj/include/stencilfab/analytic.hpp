#pragma once
/// @file analytic.hpp
/// @brief Closed-form single-core cycle model for horizontal diffusion.
///
/// For a grid with interior I = (rows-4)*(cols-4)*depth and a datapath that
/// issues M MACs per cycle and loads L bits per cycle of E-bit elements:
///
///   lap_comp  = 25*I / M                 (Laplacian multiply-accumulates)
///   flx_comp  = (2*I*4)/M + (3*I*4)/M    (flux MAC term + limiter/select term)
///   hdiff_comp = lap_comp + flx_comp
///   lap_mem   = 25*I*E / L               (Laplacian operand loads)
///   flx_mem   =  8*I*E / L               (flux operand loads)
///   hdiff_mem = lap_mem + flx_mem
///
/// All values are exact doubles; callers apply ceilings only when printing.
/// A kernel is compute-bound when comp/mem > 1.1, memory-bound below 0.9,
/// and balanced within the 10% band.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "stencilfab/datapath.hpp"

namespace stencilfab {

enum class Balance { ComputeBound, MemoryBound, Balanced };
const char* balance_name(Balance b);

/// Flux compute cycles split into its MAC and non-MAC terms.
struct FluxCompTerms {
    double mac = 0.0;
    double nonmac = 0.0;
    double total() const { return mac + nonmac; }
};

/// Interior cell count; rows or cols of exactly 4 give zero (legal), smaller
/// values are a parameter error.
int64_t hdiff_interior_cells(int rows, int cols, int depth);

double lap_comp_cycles(int rows, int cols, int depth, const DatapathSpec& dp);
FluxCompTerms flx_comp_cycles(int rows, int cols, int depth, const DatapathSpec& dp);
double hdiff_comp_cycles(int rows, int cols, int depth, const DatapathSpec& dp);
double lap_mem_cycles(int rows, int cols, int depth, const DatapathSpec& dp);
double flx_mem_cycles(int rows, int cols, int depth, const DatapathSpec& dp);
double hdiff_mem_cycles(int rows, int cols, int depth, const DatapathSpec& dp);

Balance classify_balance(double comp_cycles, double mem_cycles);

struct AnalyticReport {
    int rows = 0, cols = 0, depth = 0;
    DatapathSpec datapath;
    int64_t interior_cells = 0;
    double lap_comp = 0, flx_comp_mac = 0, flx_comp_nonmac = 0, flx_comp = 0,
           hdiff_comp = 0;
    double lap_mem = 0, flx_mem = 0, hdiff_mem = 0;
    double comp_mem_ratio = 0; ///< 0 when there is no interior
    Balance balance = Balance::Balanced;
    bool has_interior = true;
};

AnalyticReport analyze_hdiff(int rows, int cols, int depth, const DatapathSpec& dp = {});

nlohmann::ordered_json analytic_report_json(const AnalyticReport& rep);

} // namespace stencilfab
