#pragma once

#include "ks/dense.hpp"
#include "ks/dipole.hpp"
#include "ks/geom.hpp"

#include <array>
#include <span>
#include <vector>

namespace ks::mag {

// evaluation closer than this to a source is rejected
inline constexpr double kMinSourceDistance = 1e-6;

// translation-invariant source kernel at offset r from the source:
// the field contribution is intensity * M * direction
struct SourceKernel {
    Mat2 M;
    Mat2 dM[2]; // dM[k] = ∂M/∂x_k
};

SourceKernel source_kernel(const Vec2& r);

// second spatial derivatives ∂²M/∂x_k∂x_m, symmetric in (k, m)
struct SourceKernelHessian {
    Mat2 d2M[2][2];
};

SourceKernelHessian source_kernel_hessian(const Vec2& r);

struct FieldSample {
    Vec2 h;      // magnetic field
    Mat2 grad_h; // column k = ∂h/∂x_k
    Vec2 kelvin; // ∇|h|² = 2 (grad_h)ᵀ h
};

FieldSample eval_field(std::span<const Dipole> states, const Vec2& x);
FieldSample eval_field(const DipoleConfig& config, std::span<const double> controls,
                       const Vec2& x);

// Coefficient matrices C_k of the force quadratic form: with placements fixed,
// (∇|h|²)_k(x) = aᵀ C_k(x) a where a is the intensity vector. The placements
// argument holds direction angles or curve parameters depending on the mode.
std::array<DenseMat, 2> kelvin_coefficients(const DipoleConfig& config,
                                            std::span<const double> placements, const Vec2& x);

// force value and its derivative w.r.t. every control, at one point;
// the caller may reuse the output object to avoid reallocation
struct ForcePointEval {
    Vec2 kelvin;
    std::vector<Vec2> d_intensity; // entry j = ∂kelvin/∂intensity_j
    std::vector<Vec2> d_placement; // entry j = ∂kelvin/∂placement_j
};

void force_with_control_grad(const DipoleConfig& config, std::span<const double> controls,
                             const Vec2& x, ForcePointEval& out);

} // namespace ks::mag
