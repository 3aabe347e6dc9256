#include "stencilfab/fabric.hpp"

#include <fstream>
#include <set>

#include "stencilfab/errors.hpp"

namespace stencilfab {

const char* link_kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::Direct: return "direct";
        case LinkKind::Stream: return "stream";
        case LinkKind::Cascade: return "cascade";
        case LinkKind::ShimRead: return "shim_read";
        case LinkKind::ShimWrite: return "shim_write";
    }
    return "?";
}

LinkKind link_kind_from_name(const std::string& name) {
    if (name == "direct") return LinkKind::Direct;
    if (name == "stream") return LinkKind::Stream;
    if (name == "cascade") return LinkKind::Cascade;
    if (name == "shim_read") return LinkKind::ShimRead;
    if (name == "shim_write") return LinkKind::ShimWrite;
    fail_parameter("unknown link kind '" + name + "'");
}

void validate_fabric(const FabricSpec& f) {
    auto positive = [](int v, const char* what) {
        if (v < 1) fail_parameter(std::string(what) + " must be positive");
    };
    positive(f.array_cols, "array_cols");
    positive(f.array_rows, "array_rows");
    positive(f.data_mem_bytes, "data_mem_bytes");
    positive(f.dmas_per_core, "dmas_per_core");
    positive(f.neighbor_bits, "neighbor_bits");
    positive(f.cascade_bits, "cascade_bits");
    positive(f.stream_bits, "stream_bits");
    positive(f.streams_per_direction, "streams_per_direction");
    positive(f.shim_count, "shim_count");
    positive(f.shim_channel_bits, "shim_channel_bits");
    positive(f.read_channels_per_shim, "read_channels_per_shim");
    positive(f.write_channels_per_shim, "write_channels_per_shim");
    if (f.clock_ghz <= 0.0) fail_parameter("clock_ghz must be positive");
    validate_datapath(f.datapath);
    if (f.srs_latency_cycles < 0) fail_parameter("srs_latency_cycles must be >= 0");
    if (f.f32_mac_latency < 1) fail_parameter("f32_mac_latency must be >= 1");
    if (f.f32_penalty < 1.0) fail_parameter("f32_penalty must be >= 1");
    if (f.vliw_efficiency <= 0.0 || f.vliw_efficiency > 1.0)
        fail_parameter("vliw_efficiency must lie in (0, 1]");
    if (f.mixed_penalty < 1.0) fail_parameter("mixed_penalty must be >= 1");
}

double link_bits_per_cycle(const FabricSpec& f, LinkKind kind) {
    switch (kind) {
        case LinkKind::Direct: return f.neighbor_bits;
        case LinkKind::Stream: return f.stream_bits;
        case LinkKind::Cascade: return f.cascade_bits;
        case LinkKind::ShimRead:
        case LinkKind::ShimWrite: return f.shim_channel_bits;
    }
    fail_parameter("bad link kind");
}

nlohmann::ordered_json fabric_json(const FabricSpec& f) {
    nlohmann::ordered_json j;
    j["fabric_version"] = 1;
    j["array_cols"] = f.array_cols;
    j["array_rows"] = f.array_rows;
    j["data_mem_bytes"] = f.data_mem_bytes;
    j["dmas_per_core"] = f.dmas_per_core;
    j["neighbor_bits"] = f.neighbor_bits;
    j["cascade_bits"] = f.cascade_bits;
    j["stream_bits"] = f.stream_bits;
    j["streams_per_direction"] = f.streams_per_direction;
    j["shim_count"] = f.shim_count;
    j["shim_channel_bits"] = f.shim_channel_bits;
    j["read_channels_per_shim"] = f.read_channels_per_shim;
    j["write_channels_per_shim"] = f.write_channels_per_shim;
    j["clock_ghz"] = f.clock_ghz;
    j["datapath"] = {{"macs_per_cycle", f.datapath.macs_per_cycle},
                     {"nonmac_per_cycle", f.datapath.nonmac_per_cycle},
                     {"load_bits_per_cycle", f.datapath.load_bits_per_cycle},
                     {"elem_bits", f.datapath.elem_bits}};
    j["srs_latency_cycles"] = f.srs_latency_cycles;
    j["f32_mac_latency"] = f.f32_mac_latency;
    j["f32_penalty"] = f.f32_penalty;
    j["vliw_efficiency"] = f.vliw_efficiency;
    j["mixed_penalty"] = f.mixed_penalty;
    return j;
}

FabricSpec fabric_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail_validation("fabric JSON must be an object");
    static const std::set<std::string> known = {
        "fabric_version", "array_cols", "array_rows", "data_mem_bytes", "dmas_per_core",
        "neighbor_bits", "cascade_bits", "stream_bits", "streams_per_direction",
        "shim_count", "shim_channel_bits", "read_channels_per_shim",
        "write_channels_per_shim", "clock_ghz", "datapath", "srs_latency_cycles",
        "f32_mac_latency", "f32_penalty", "vliw_efficiency", "mixed_penalty"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            fail_validation("unknown fabric key '" + it.key() + "'");
    if (j.contains("fabric_version") && j["fabric_version"].get<int>() != 1)
        fail_validation("unsupported fabric_version");
    FabricSpec f;
    try {
        auto get_int = [&](const char* key, int& dst) {
            if (j.contains(key)) dst = j.at(key).get<int>();
        };
        auto get_dbl = [&](const char* key, double& dst) {
            if (j.contains(key)) dst = j.at(key).get<double>();
        };
        get_int("array_cols", f.array_cols);
        get_int("array_rows", f.array_rows);
        get_int("data_mem_bytes", f.data_mem_bytes);
        get_int("dmas_per_core", f.dmas_per_core);
        get_int("neighbor_bits", f.neighbor_bits);
        get_int("cascade_bits", f.cascade_bits);
        get_int("stream_bits", f.stream_bits);
        get_int("streams_per_direction", f.streams_per_direction);
        get_int("shim_count", f.shim_count);
        get_int("shim_channel_bits", f.shim_channel_bits);
        get_int("read_channels_per_shim", f.read_channels_per_shim);
        get_int("write_channels_per_shim", f.write_channels_per_shim);
        get_dbl("clock_ghz", f.clock_ghz);
        if (j.contains("datapath")) {
            const auto& dp = j.at("datapath");
            static const std::set<std::string> dp_known = {
                "macs_per_cycle", "nonmac_per_cycle", "load_bits_per_cycle", "elem_bits"};
            for (auto it = dp.begin(); it != dp.end(); ++it)
                if (!dp_known.count(it.key()))
                    fail_validation("unknown datapath key '" + it.key() + "'");
            if (dp.contains("macs_per_cycle"))
                f.datapath.macs_per_cycle = dp.at("macs_per_cycle").get<int>();
            if (dp.contains("nonmac_per_cycle"))
                f.datapath.nonmac_per_cycle = dp.at("nonmac_per_cycle").get<int>();
            if (dp.contains("load_bits_per_cycle"))
                f.datapath.load_bits_per_cycle = dp.at("load_bits_per_cycle").get<int>();
            if (dp.contains("elem_bits")) f.datapath.elem_bits = dp.at("elem_bits").get<int>();
        }
        get_int("srs_latency_cycles", f.srs_latency_cycles);
        get_int("f32_mac_latency", f.f32_mac_latency);
        get_dbl("f32_penalty", f.f32_penalty);
        get_dbl("vliw_efficiency", f.vliw_efficiency);
        get_dbl("mixed_penalty", f.mixed_penalty);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail_validation(std::string("bad fabric JSON: ") + e.what());
    }
    validate_fabric(f);
    return f;
}

FabricSpec load_fabric(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail_io("cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        fail_validation("bad fabric JSON in '" + path + "': " + e.what());
    }
    return fabric_from_json(j);
}

void save_fabric(const FabricSpec& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) fail_io("cannot open '" + path + "' for writing");
    os << fabric_json(f).dump(2) << '\n';
    if (!os) fail_io("write failed for '" + path + "'");
}

} // namespace stencilfab
