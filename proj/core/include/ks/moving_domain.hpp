#pragma once

#include "ks/geom.hpp"

#include <vector>

namespace ks::dom {

// piecewise-linear scalar function of time given by (time, value) nodes
struct PiecewiseLinear {
    std::vector<double> times;
    std::vector<double> values;

    double operator()(double t) const;
    void validate() const; // strictly increasing times, matching sizes
};

// piecewise-linear curve in the plane given by (time, point) nodes
struct PiecewisePath {
    std::vector<double> times;
    std::vector<Vec2> points;

    Vec2 operator()(double t) const;
    void validate() const;
};

// Reference disk transported by translation and isotropic scaling:
//   x(t, x̂) = translation(t) + scale(t) · x̂.
// The translation starts at the origin and the scale at one, so the reference
// disk is the tracked region at t = 0.
struct MovingDomain {
    Disk reference;
    PiecewisePath translation; // must satisfy translation(0) = (0,0)
    PiecewiseLinear scale;     // must satisfy scale(0) = 1, scale > 0 throughout

    double t_end() const { return translation.times.back(); }

    Vec2 map_point(double t, const Vec2& xhat) const;
    double scale_at(double t) const { return scale(t); }
    // area change factor of the map at time t (dimension 2)
    double jacobian_det(double t) const;

    Disk region_at(double t) const;

    // times where translation or scale changes slope; time integration is
    // split at these points
    std::vector<double> kink_times() const;

    void validate() const;

    static MovingDomain stationary(const Disk& reference, double t_end);
};

} // namespace ks::dom
