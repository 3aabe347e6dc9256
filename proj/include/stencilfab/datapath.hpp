#pragma once
/// @file datapath.hpp
/// @brief Per-core datapath capabilities shared by the analytic model and the
///        fabric description.

namespace stencilfab {

struct DatapathSpec {
    int macs_per_cycle = 8;      ///< 32-bit multiply-accumulates issued per cycle
    int nonmac_per_cycle = 8;    ///< compare/select/add lanes per cycle
    int load_bits_per_cycle = 512; ///< local-memory load bandwidth
    int elem_bits = 32;          ///< element width
};

/// Throws a parameter error unless every field is positive.
void validate_datapath(const DatapathSpec& dp);

} // namespace stencilfab
