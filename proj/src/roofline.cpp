#include "stencilfab/roofline.hpp"

#include <algorithm>
#include <fstream>

#include "stencilfab/errors.hpp"

namespace stencilfab {

double percent_of_peak(double achieved_gflops, double peak_gflops) {
    if (peak_gflops <= 0.0) fail_parameter("peak throughput must be positive");
    if (achieved_gflops < 0.0) fail_parameter("achieved throughput must be non-negative");
    return 100.0 * achieved_gflops / peak_gflops;
}

double roofline_attainable_gflops(const PlatformSpec& p, double ai_flops_per_byte) {
    if (p.peak_gflops <= 0.0 || p.mem_bw_gbs <= 0.0)
        fail_parameter("platform rates must be positive");
    if (ai_flops_per_byte < 0.0) fail_parameter("arithmetic intensity must be non-negative");
    return std::min(p.peak_gflops, ai_flops_per_byte * p.mem_bw_gbs);
}

const std::vector<PlatformSpec>& builtin_platforms() {
    static const std::vector<PlatformSpec> table = {
        {"xcvu3p", 970.0, 25.6, 129.9, 13.4, ""},
        {"xeon-e5-2690v3", 246.0, 68.0, 32.0, 13.0,
         "peak often quoted rounded to 0.24 TFLOP/s; 246 GFLOP/s reproduces the "
         "reported percent-of-peak"},
        {"power9", 490.0, 110.0, 58.5, 11.8, ""},
        {"v100", 14100.0, 900.0, 849.0, 6.1, ""},
        {"stratix10", 9200.0, 76.8, 145.0, 1.6, ""},
        {"xcvu37p", 3600.0, 410.0, 485.4, 13.5, ""},
        {"xcvc1902", 3100.0, 25.6, 995.7, 32.2, ""},
    };
    return table;
}

const PlatformSpec& platform_by_name(const std::string& name) {
    for (const auto& p : builtin_platforms())
        if (p.name == name) return p;
    fail_parameter("unknown platform '" + name + "'");
}

std::vector<PlatformSpec> load_platforms(const std::string& json_path) {
    std::ifstream is(json_path);
    if (!is) fail_io("cannot open '" + json_path + "' for reading");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        fail_validation("bad platform JSON in '" + json_path + "': " + e.what());
    }
    if (!j.contains("platforms") || !j["platforms"].is_array())
        fail_validation("platform JSON must contain a 'platforms' array");
    std::vector<PlatformSpec> table;
    for (const auto& row : j["platforms"]) {
        PlatformSpec p;
        try {
            p.name = row.at("name").get<std::string>();
            p.peak_gflops = row.at("peak_gflops").get<double>();
            p.mem_bw_gbs = row.at("mem_bw_gbs").get<double>();
            p.achieved_gflops = row.at("achieved_gflops").get<double>();
            p.reported_percent = row.at("reported_percent").get<double>();
            p.note = row.value("note", std::string());
        } catch (const std::exception& e) {
            fail_validation(std::string("bad platform row: ") + e.what());
        }
        if (p.peak_gflops <= 0.0 || p.mem_bw_gbs <= 0.0)
            fail_validation("platform '" + p.name + "' has non-positive rates");
        table.push_back(std::move(p));
    }
    return table;
}

nlohmann::ordered_json platforms_json(const std::vector<PlatformSpec>& table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& p : table) {
        nlohmann::ordered_json row;
        row["name"] = p.name;
        row["peak_gflops"] = p.peak_gflops;
        row["mem_bw_gbs"] = p.mem_bw_gbs;
        row["achieved_gflops"] = p.achieved_gflops;
        row["reported_percent"] = p.reported_percent;
        if (!p.note.empty()) row["note"] = p.note;
        rows.push_back(std::move(row));
    }
    return nlohmann::ordered_json{{"platforms", std::move(rows)}};
}

nlohmann::ordered_json roofline_table_json(const std::vector<PlatformSpec>& table,
                                           double ai_flops_per_byte) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& p : table) {
        nlohmann::ordered_json row;
        row["name"] = p.name;
        row["peak_gflops"] = p.peak_gflops;
        row["mem_bw_gbs"] = p.mem_bw_gbs;
        row["achieved_gflops"] = p.achieved_gflops;
        row["percent_of_peak"] = percent_of_peak(p.achieved_gflops, p.peak_gflops);
        row["reported_percent"] = p.reported_percent;
        if (ai_flops_per_byte > 0.0)
            row["attainable_gflops"] = roofline_attainable_gflops(p, ai_flops_per_byte);
        if (!p.note.empty()) row["note"] = p.note;
        rows.push_back(std::move(row));
    }
    nlohmann::ordered_json out;
    if (ai_flops_per_byte > 0.0) out["arithmetic_intensity"] = ai_flops_per_byte;
    out["rows"] = std::move(rows);
    return out;
}

} // namespace stencilfab
