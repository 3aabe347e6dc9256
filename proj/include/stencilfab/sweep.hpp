#pragma once
/// @file sweep.hpp
/// @brief Run a list of designs on one input and tabulate the results.

#include <string>
#include <vector>

#include "json.hpp"
#include "stencilfab/fabric.hpp"
#include "stencilfab/grid.hpp"
#include "stencilfab/mapper.hpp"

namespace stencilfab {

struct SweepRow {
    std::string design;
    int cores_used = 0;
    int64_t runtime_cycles = 0;
    double steady_row_period = 0.0;
    double predicted_row_period = 0.0;
    double speedup = 1.0;       ///< first design's runtime / this runtime
    bool output_matches = true; ///< simulated output equals the golden reference
};

struct SweepResult {
    std::string kernel;
    int rows = 0, cols = 0, depth = 0;
    std::vector<SweepRow> rows_out;
};

/// Simulates each design on `input` and verifies every run against the golden
/// reference (I32 bitwise, F32 within 1e-5 relative). The first design is the
/// speedup baseline.
SweepResult run_sweep(const std::vector<std::string>& designs, const std::string& kernel,
                      const Grid3& input, const FabricSpec& fabric,
                      const BuildOptions& opts = {});

nlohmann::ordered_json sweep_json(const SweepResult& result);
std::string sweep_csv(const SweepResult& result);

} // namespace stencilfab
