#pragma once
/// @file mapper.hpp
/// @brief Builders that turn a design string into a validated mapping plan.
///
/// Horizontal-diffusion designs:
///   single_i32 / single_f32    one core runs the whole kernel
///   dual_i32_direct            Laplacian core + fused flux core, neighbor link
///   dual_i32_stream            same split over a routed stream
///   dual_i32_cascade           same split over the cascade chain
///   tri_i32_direct             Laplacian / flux-MAC / flux-non-MAC pipeline
///   bblock:<lanes>             <lanes> tri pipelines row-interleaved, with a
///                              gather core restoring row order (lanes 1..4)
///   scaleout:<n>               n bblock:4 replicas, planes dealt round-robin
///
/// Elementary kernels use elem:<cores>, one whole-kernel core per shim
/// channel; two-dimensional stencils deal planes round-robin, the
/// one-dimensional kernel deals rows.

#include <string>

#include "stencilfab/fabric.hpp"
#include "stencilfab/plan.hpp"

namespace stencilfab {

struct DesignSpec {
    enum class Family { Single, Dual, Tri, BBlock, ScaleOut, Elem };
    Family family = Family::Single;
    DType dtype = DType::I32;
    LinkKind dual_link = LinkKind::Direct;
    int lanes = 1;  ///< BBlock lane count
    int blocks = 1; ///< ScaleOut replica count
    int cores = 1;  ///< Elem core count
};

/// Parses a design string; throws a parameter error for unknown designs.
DesignSpec parse_design(const std::string& text);

/// All horizontal-diffusion design strings with fixed shapes (no parameters),
/// in comparison order.
std::vector<std::string> hdiff_design_names();

struct BuildOptions {
    double coeff = 1.0;
    int srs_shift = 0;
    bool no_limiter = false;
    DType elem_dtype = DType::I32; ///< dtype for elem:<n> designs
};

/// Builds and validates a plan for `design` on a rows x cols x depth grid.
/// `kernel` must be "hdiff" for the hdiff designs and an elementary stencil
/// name for elem:<n>.
MappingPlan build_plan(const std::string& design, const std::string& kernel, int rows,
                       int cols, int depth, const FabricSpec& fabric,
                       const BuildOptions& opts = {});

} // namespace stencilfab
