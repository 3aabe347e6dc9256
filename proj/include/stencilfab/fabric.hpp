#pragma once
/// @file fabric.hpp
/// @brief Spatial-array hardware description: core grid, memories, links.
///
/// The modelled device is a rectangular array of VLIW vector cores. Each core
/// owns a local data memory that the four adjacent cores can read directly
/// (neighbor access, no DMA); non-adjacent transfers go through routed streams
/// (DMA on both ends) or the one-directional cascade chain (register path,
/// no memory, no DMA). Shim tiles on the array edge move data to and from
/// external memory through a fixed number of read and write channels.
/// Defaults follow a current production part; every field can be overridden
/// via JSON so what-if studies need no recompilation.

#include <string>

#include "json.hpp"
#include "stencilfab/datapath.hpp"

namespace stencilfab {

/// How a producer's values reach a consumer.
enum class LinkKind {
    Direct,   ///< consumer reads the producer's (adjacent) memory: no DMA
    Stream,   ///< routed stream: DMA out of producer, DMA into consumer
    Cascade,  ///< accumulator chain to the next core: no memory, no DMA
    ShimRead, ///< external memory -> core, through a shim read channel
    ShimWrite ///< core -> external memory, through a shim write channel
};

const char* link_kind_name(LinkKind k);
LinkKind link_kind_from_name(const std::string& name);

struct FabricSpec {
    int array_cols = 50;
    int array_rows = 8;
    int data_mem_bytes = 32768; ///< local data memory per core
    int dmas_per_core = 2;      ///< DMA budget per direction (in and out separately)
    int neighbor_bits = 256;    ///< bits/cycle for adjacent-memory reads
    int cascade_bits = 384;     ///< bits/cycle on the cascade chain
    int stream_bits = 32;       ///< bits/cycle of one routed stream lane
    int streams_per_direction = 2;
    int shim_count = 16;
    int shim_channel_bits = 256; ///< bits/cycle of one shim DMA channel
    int read_channels_per_shim = 2;
    int write_channels_per_shim = 2;
    double clock_ghz = 1.0;
    DatapathSpec datapath;
    int srs_latency_cycles = 4; ///< latency of a shift-round-saturate store burst
    int f32_mac_latency = 2;    ///< fp MAC result latency, cycles (informational)
    double f32_penalty = 1.3;   ///< fp MAC throughput derate vs int
    double vliw_efficiency = 0.85; ///< achieved slot fill for single-role loops
    double mixed_penalty = 1.5; ///< extra derate when MAC and non-MAC work interleave

    int cores() const { return array_cols * array_rows; }
};

/// Throws a parameter error on any non-physical field.
void validate_fabric(const FabricSpec& f);

/// Bits per cycle carried by one link of the given kind.
double link_bits_per_cycle(const FabricSpec& f, LinkKind kind);

nlohmann::ordered_json fabric_json(const FabricSpec& f);

/// Parses a fabric description; unknown keys are a validation error so typos
/// cannot silently fall back to defaults. Missing keys keep their defaults.
FabricSpec fabric_from_json(const nlohmann::json& j);

FabricSpec load_fabric(const std::string& path);
void save_fabric(const FabricSpec& f, const std::string& path);

} // namespace stencilfab
