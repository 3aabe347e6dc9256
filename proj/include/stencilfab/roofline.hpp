#pragma once
/// @file roofline.hpp
/// @brief Roofline comparisons against published stencil results.
///
/// A platform is characterised by its peak arithmetic throughput and its
/// external memory bandwidth. The attainable throughput at arithmetic
/// intensity ai (flop/byte) is min(peak, ai * bandwidth); percent-of-peak is
/// 100 * achieved / peak. The built-in table lists published single-device
/// horizontal-diffusion results used for cross-checking; the same table ships
/// as data/platforms.json so users can extend it without recompiling.

#include <string>
#include <vector>

#include "json.hpp"

namespace stencilfab {

struct PlatformSpec {
    std::string name;
    double peak_gflops = 0;      ///< device peak, GFLOP/s
    double mem_bw_gbs = 0;       ///< external memory bandwidth, GB/s
    double achieved_gflops = 0;  ///< measured kernel throughput, GFLOP/s
    double reported_percent = 0; ///< published percent-of-peak, for cross-checks
    std::string note;            ///< optional caveat about the numbers
};

/// 100 * achieved / peak. Peak must be positive.
double percent_of_peak(double achieved_gflops, double peak_gflops);

/// min(peak, ai * bandwidth). ai must be non-negative, rates positive.
double roofline_attainable_gflops(const PlatformSpec& p, double ai_flops_per_byte);

/// The built-in published-results table.
const std::vector<PlatformSpec>& builtin_platforms();

/// Built-in row by name; throws a parameter error when absent.
const PlatformSpec& platform_by_name(const std::string& name);

/// Reads a platform table from JSON ({"platforms": [{name, peak_gflops,
/// mem_bw_gbs, achieved_gflops, reported_percent, note?}, ...]}).
std::vector<PlatformSpec> load_platforms(const std::string& json_path);

/// Serialises a table in the same schema load_platforms reads.
nlohmann::ordered_json platforms_json(const std::vector<PlatformSpec>& table);

/// Per-row roofline summary: recomputed percent-of-peak and, if ai > 0, the
/// attainable roof at that intensity.
nlohmann::ordered_json roofline_table_json(const std::vector<PlatformSpec>& table,
                                           double ai_flops_per_byte);

} // namespace stencilfab
