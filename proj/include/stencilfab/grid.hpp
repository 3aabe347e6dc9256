#pragma once
/// @file grid.hpp
/// @brief Dense 3-D grid container: R rows x C cols x D depth planes.
///
/// Memory layout is row-major with depth slowest: element (r, c, d) lives at
/// linear index d*R*C + r*C + c, so each plane is a contiguous R x C matrix.
/// Values are either 32-bit signed integers (I32) or IEEE floats (F32).

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "stencilfab/errors.hpp"

namespace stencilfab {

enum class DType : uint8_t { I32 = 0, F32 = 1 };

const char* dtype_name(DType t);
DType dtype_from_name(const std::string& name);

class Grid3 {
public:
    Grid3() = default;
    Grid3(DType dtype, int rows, int cols, int depth);

    DType dtype() const { return dtype_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int depth() const { return depth_; }
    std::size_t size() const {
        return static_cast<std::size_t>(rows_) * cols_ * depth_;
    }

    std::size_t index(int r, int c, int d) const {
        return static_cast<std::size_t>(d) * rows_ * cols_ +
               static_cast<std::size_t>(r) * cols_ + c;
    }

    int32_t i32(std::size_t idx) const { return vi_[idx]; }
    int32_t& i32(std::size_t idx) { return vi_[idx]; }
    float f32(std::size_t idx) const { return vf_[idx]; }
    float& f32(std::size_t idx) { return vf_[idx]; }

    int32_t i32(int r, int c, int d) const { return vi_[index(r, c, d)]; }
    int32_t& i32(int r, int c, int d) { return vi_[index(r, c, d)]; }
    float f32(int r, int c, int d) const { return vf_[index(r, c, d)]; }
    float& f32(int r, int c, int d) { return vf_[index(r, c, d)]; }

    int32_t i32_at(int r, int c, int d) const { return vi_[index(r, c, d)]; }
    float f32_at(int r, int c, int d) const { return vf_[index(r, c, d)]; }

    const int32_t* i32_row(int r, int d) const { return vi_.data() + index(0, 0, d) + static_cast<std::size_t>(r) * cols_; }
    int32_t* i32_row(int r, int d) { return vi_.data() + index(0, 0, d) + static_cast<std::size_t>(r) * cols_; }
    const float* f32_row(int r, int d) const { return vf_.data() + index(0, 0, d) + static_cast<std::size_t>(r) * cols_; }
    float* f32_row(int r, int d) { return vf_.data() + index(0, 0, d) + static_cast<std::size_t>(r) * cols_; }

    const std::vector<int32_t>& i32_data() const { return vi_; }
    std::vector<int32_t>& i32_data() { return vi_; }
    const std::vector<float>& f32_data() const { return vf_; }
    std::vector<float>& f32_data() { return vf_; }

    /// Element as double regardless of dtype (convenience for reporting).
    double as_double(int r, int c, int d) const {
        return dtype_ == DType::I32 ? static_cast<double>(i32_at(r, c, d))
                                    : static_cast<double>(f32_at(r, c, d));
    }

    bool same_shape(const Grid3& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && depth_ == o.depth_ &&
               dtype_ == o.dtype_;
    }

private:
    DType dtype_ = DType::I32;
    int rows_ = 0, cols_ = 0, depth_ = 0;
    std::vector<int32_t> vi_;
    std::vector<float> vf_;
};

/// Exact equality (bitwise values, same shape and dtype).
bool grids_equal(const Grid3& a, const Grid3& b);

/// Comparison result for compare_grids.
struct GridDelta {
    bool match = true;          // within tolerance (I32: bitwise)
    std::size_t mismatches = 0; // elements out of tolerance
    double max_rel_error = 0.0; // F32 only; relative with absolute floor 1.0
    int first_r = -1, first_c = -1, first_d = -1;
};

/// I32 grids compare bitwise; F32 grids compare with relative tolerance
/// |a-b| <= tol * max(1, |a|, |b|).
GridDelta compare_grids(const Grid3& a, const Grid3& b, double f32_tol = 1e-5);

} // namespace stencilfab
