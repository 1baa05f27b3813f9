#include "ks/moving_domain.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>

namespace ks::dom {

namespace {

// index of the segment containing t; clamps to the parameter range up to a
// small tolerance and rejects anything further out
std::size_t locate(const std::vector<double>& times, double& t) {
    const double t0 = times.front(), t1 = times.back();
    const double tol = 1e-12 * std::max(1.0, std::abs(t1));
    if (t < t0 - tol || t > t1 + tol) throw EvalError("time outside the domain schedule");
    t = std::clamp(t, t0, t1);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin());
    if (i == 0) return 0;
    if (i >= times.size()) return times.size() - 2;
    return i - 1;
}

void check_times(const std::vector<double>& times, std::size_t n_values) {
    if (times.size() < 2) throw ValidationError("schedule needs at least two time nodes");
    if (times.size() != n_values) throw ValidationError("schedule size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ValidationError("schedule times must be strictly increasing");
}

} // namespace

double PiecewiseLinear::operator()(double t) const {
    const std::size_t i = locate(times, t);
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

void PiecewiseLinear::validate() const { check_times(times, values.size()); }

Vec2 PiecewisePath::operator()(double t) const {
    const std::size_t i = locate(times, t);
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - w) * points[i] + w * points[i + 1];
}

void PiecewisePath::validate() const { check_times(times, points.size()); }

Vec2 MovingDomain::map_point(double t, const Vec2& xhat) const {
    return translation(t) + scale(t) * xhat;
}

double MovingDomain::jacobian_det(double t) const {
    const double s = scale(t);
    return s * s;
}

Disk MovingDomain::region_at(double t) const {
    return {translation(t) + reference.center, scale(t) * reference.radius};
}

std::vector<double> MovingDomain::kink_times() const {
    std::vector<double> k(translation.times);
    k.insert(k.end(), scale.times.begin(), scale.times.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            k.end());
    return k;
}

void MovingDomain::validate() const {
    translation.validate();
    scale.validate();
    if (!(reference.radius > 0.0)) throw ValidationError("moving domain: radius must be positive");
    if (translation.times.front() != 0.0 || scale.times.front() != 0.0)
        throw ValidationError("moving domain: schedules must start at t = 0");
    if (std::abs(translation.times.back() - scale.times.back()) > 1e-12)
        throw ValidationError("moving domain: translation and scale must end at the same time");
    if (norm(translation.points.front()) != 0.0)
        throw ValidationError("moving domain: translation must start at the origin");
    if (scale.values.front() != 1.0)
        throw ValidationError("moving domain: scale must start at one");
    for (double v : scale.values)
        if (!(v > 0.0)) throw ValidationError("moving domain: scale must stay positive");
}

MovingDomain MovingDomain::stationary(const Disk& reference, double t_end) {
    MovingDomain d;
    d.reference = reference;
    d.translation = {{0.0, t_end}, {Vec2{0.0, 0.0}, Vec2{0.0, 0.0}}};
    d.scale = {{0.0, t_end}, {1.0, 1.0}};
    return d;
}

} // namespace ks::dom
