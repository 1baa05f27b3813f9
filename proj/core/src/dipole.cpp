#include "ks/dipole.hpp"

#include "ks/error.hpp"

#include <sstream>

namespace ks::mag {

std::vector<double> DipoleConfig::initial_controls() const {
    const int n = n_sources();
    std::vector<double> x(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        x[i] = dipoles[i].intensity;
        x[n + i] = mode == ControlMode::IntensityDirection ? dipoles[i].direction_angle
                                                           : dipoles[i].curve_param;
    }
    return x;
}

std::vector<double> DipoleConfig::lower_bounds() const {
    std::vector<double> lo(bounds.intensity_lo);
    lo.insert(lo.end(), bounds.placement_lo.begin(), bounds.placement_lo.end());
    return lo;
}

std::vector<double> DipoleConfig::upper_bounds() const {
    std::vector<double> hi(bounds.intensity_hi);
    hi.insert(hi.end(), bounds.placement_hi.begin(), bounds.placement_hi.end());
    return hi;
}

std::vector<Dipole> DipoleConfig::states(std::span<const double> controls) const {
    const int n = n_sources();
    if (static_cast<int>(controls.size()) != 2 * n)
        throw ValidationError("control vector size mismatch");
    std::vector<Dipole> s(dipoles);
    for (int i = 0; i < n; ++i) {
        s[i].intensity = controls[i];
        if (mode == ControlMode::IntensityDirection) {
            s[i].direction_angle = controls[n + i];
        } else {
            s[i].curve_param = controls[n + i];
            s[i].position = s[i].trajectory->position(s[i].curve_param);
        }
    }
    return s;
}

void DipoleConfig::validate() const {
    const int n = n_sources();
    if (n == 0) throw ValidationError("dipole config: no sources");

    auto check_size = [&](const std::vector<double>& v, const char* name) {
        if (static_cast<int>(v.size()) != n) {
            std::ostringstream os;
            os << "dipole config: " << name << " has " << v.size() << " entries, expected " << n;
            throw ValidationError(os.str());
        }
    };
    check_size(bounds.intensity_lo, "intensity lower bounds");
    check_size(bounds.intensity_hi, "intensity upper bounds");
    check_size(bounds.placement_lo, "placement lower bounds");
    check_size(bounds.placement_hi, "placement upper bounds");

    for (int i = 0; i < n; ++i) {
        if (!(bounds.intensity_lo[i] <= bounds.intensity_hi[i]) ||
            !(bounds.placement_lo[i] <= bounds.placement_hi[i]))
            throw ValidationError("dipole config: empty bound interval");
        if (mode == ControlMode::IntensityPosition && !dipoles[i].trajectory)
            throw ValidationError("dipole config: position mode requires a trajectory per source");
    }

    // initial controls must be feasible
    for (int i = 0; i < n; ++i) {
        const double a = dipoles[i].intensity;
        const double p = mode == ControlMode::IntensityDirection ? dipoles[i].direction_angle
                                                                 : dipoles[i].curve_param;
        if (a < bounds.intensity_lo[i] || a > bounds.intensity_hi[i] ||
            p < bounds.placement_lo[i] || p > bounds.placement_hi[i])
            throw ValidationError("dipole config: initial controls violate bounds");
    }

    if (keep_out) {
        // sample each source's reachable positions against the excluded region
        for (int i = 0; i < n; ++i) {
            if (mode == ControlMode::IntensityDirection) {
                if (keep_out->contains(dipoles[i].position))
                    throw ValidationError("dipole config: source inside the particle domain");
            } else {
                const auto& c = *dipoles[i].trajectory;
                const double lo = bounds.placement_lo[i], hi = bounds.placement_hi[i];
                const int samples = 256;
                for (int s = 0; s <= samples; ++s) {
                    const double u = lo + (hi - lo) * s / samples;
                    if (keep_out->contains(c.position(u)))
                        throw ValidationError(
                            "dipole config: trajectory enters the particle domain");
                }
            }
        }
    }
}

} // namespace ks::mag
