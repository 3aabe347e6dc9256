#pragma once
/// @file version.hpp
/// @brief Library version string.

namespace stencilfab {

inline constexpr const char* kVersion = "1.0.0";

} // namespace stencilfab
