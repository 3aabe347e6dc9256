#pragma once
/// @file grid_io.hpp
/// @brief Grid container I/O: a small binary format plus CSV planes.
///
/// Binary layout (all multi-byte fields little-endian):
///   bytes 0..3   magic "SPRT" (0x53 0x50 0x52 0x54)
///   bytes 4..5   u16 format version (currently 1)
///   byte  6      u8 dtype (0 = i32, 1 = f32)
///   byte  7      u8 reserved, must be 0
///   bytes 8..19  u32 rows, u32 cols, u32 depth
///   then rows*cols*depth 4-byte words, row-major with depth outermost
///   (word index = d*rows*cols + r*cols + c).
///
/// CSV planes are one text line per row, comma-separated values, single plane;
/// handy for hand-written fixtures.

#include <string>

#include "stencilfab/grid.hpp"

namespace stencilfab {

/// Writes the binary container. Throws an I/O error on failure.
void save_grid(const Grid3& grid, const std::string& path);

/// Reads the binary container. Throws an I/O error for unreadable files and a
/// validation error for bad magic/version/dtype/reserved/dims.
Grid3 load_grid(const std::string& path);

/// Reads a single-plane CSV file (depth = 1). All rows must have the same
/// number of fields. Values are parsed as integers for I32 and floats for F32.
Grid3 load_csv_plane(const std::string& path, DType dtype);

/// Writes plane `d` of the grid as CSV.
void save_csv_plane(const Grid3& grid, int d, const std::string& path);

} // namespace stencilfab
