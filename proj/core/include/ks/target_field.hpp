#pragma once

#include "ks/geom.hpp"
#include "ks/moving_domain.hpp"
#include "ks/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ks::dom {

// desired force field f(t, x); breakpoints list the times where f may jump so
// time integration can split there
struct TargetField {
    std::function<Vec2(double, const Vec2&)> sampler;
    std::vector<double> breakpoints;
    std::string description;

    Vec2 operator()(double t, const Vec2& x) const { return sampler(t, x); }
};

TargetField constant_target(const Vec2& value);

// value_k holds on [switch_{k-1}, switch_k); the last value holds to the end
TargetField piecewise_constant_target(const std::vector<double>& switch_times,
                                      const std::vector<Vec2>& values);

// Pulled-back, scale-weighted, time-averaged target over step n at every
// quadrature node of the reference disk:
//   (1/τ) ∫ over the step of f(t, X(t, x̂_q)) · ψ(t)^{d/2} dt,  d = 2.
// The integral uses 3-point Gauss per smooth piece, splitting at target
// breakpoints and domain schedule kinks.
std::vector<Vec2> time_averaged_target(const TargetField& f, int n, double tau,
                                       const MovingDomain& dom, const QuadratureRule& rule);

} // namespace ks::dom
