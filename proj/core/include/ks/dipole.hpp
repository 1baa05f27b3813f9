#pragma once

#include "ks/geom.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ks::mag {

// smooth parametrised curve, carrier for position-controlled sources
class Curve {
public:
    virtual ~Curve() = default;
    virtual Vec2 position(double u) const = 0;
    virtual Vec2 derivative(double u) const = 0;
};

class CircleCurve final : public Curve {
public:
    CircleCurve(Vec2 center, double radius) : center_(center), radius_(radius) {}
    Vec2 position(double u) const override {
        return center_ + radius_ * Vec2{std::cos(u), std::sin(u)};
    }
    Vec2 derivative(double u) const override {
        return radius_ * Vec2{-std::sin(u), std::cos(u)};
    }

private:
    Vec2 center_;
    double radius_;
};

enum class ControlMode {
    IntensityDirection, // controls: intensities and direction angles, positions fixed
    IntensityPosition,  // controls: intensities and curve parameters, directions fixed
};

// state of one source at one instant
struct Dipole {
    Vec2 position;
    double direction_angle = 0.0; // unit moment direction (cos a, sin a)
    double intensity = 0.0;
    std::shared_ptr<const Curve> trajectory; // set iff the position is curve-driven
    double curve_param = 0.0;                // parameter along trajectory

    Vec2 direction() const { return {std::cos(direction_angle), std::sin(direction_angle)}; }
};

// per-source box constraints on the two control blocks
struct ControlBounds {
    std::vector<double> intensity_lo, intensity_hi;
    std::vector<double> placement_lo, placement_hi; // direction angle or curve parameter
};

// static description of the source array: initial states, control mode, bounds
struct DipoleConfig {
    ControlMode mode = ControlMode::IntensityDirection;
    std::vector<Dipole> dipoles; // initial states
    ControlBounds bounds;

    // sources must stay strictly outside this region (the particle domain)
    std::optional<Disk> keep_out;

    int n_sources() const { return static_cast<int>(dipoles.size()); }
    // control vector layout: [intensity_0..intensity_{n-1}, placement_0..placement_{n-1}]
    int control_dim() const { return 2 * n_sources(); }

    std::vector<double> initial_controls() const;
    std::vector<double> lower_bounds() const;
    std::vector<double> upper_bounds() const;

    // instantaneous source states for one control vector
    std::vector<Dipole> states(std::span<const double> controls) const;

    void validate() const; // throws ValidationError
};

} // namespace ks::mag
