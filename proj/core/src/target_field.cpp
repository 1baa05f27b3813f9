#include "ks/target_field.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ks::dom {

TargetField constant_target(const Vec2& value) {
    TargetField f;
    f.sampler = [value](double, const Vec2&) { return value; };
    std::ostringstream os;
    os << "constant (" << value.x << ", " << value.y << ")";
    f.description = os.str();
    return f;
}

TargetField piecewise_constant_target(const std::vector<double>& switch_times,
                                      const std::vector<Vec2>& values) {
    if (values.empty()) throw ValidationError("piecewise target: no values");
    if (switch_times.size() + 1 != values.size())
        throw ValidationError("piecewise target: need one more value than switch times");
    if (!std::is_sorted(switch_times.begin(), switch_times.end()))
        throw ValidationError("piecewise target: switch times must be sorted");

    TargetField f;
    f.breakpoints = switch_times;
    f.sampler = [switch_times, values](double t, const Vec2&) {
        std::size_t k = std::upper_bound(switch_times.begin(), switch_times.end(), t) -
                        switch_times.begin();
        return values[k];
    };
    f.description = "piecewise constant";
    return f;
}

std::vector<Vec2> time_averaged_target(const TargetField& f, int n, double tau,
                                       const MovingDomain& dom, const QuadratureRule& rule) {
    if (n < 1) throw ValidationError("time averaged target: step index must be >= 1");
    const double t0 = (n - 1) * tau;
    const double t1 = std::min(n * tau, dom.t_end());

    // split points: target jumps and schedule kinks interior to the step
    std::vector<double> cuts = {t0, t1};
    auto add_cut = [&](double t) {
        if (t > t0 + 1e-14 && t < t1 - 1e-14) cuts.push_back(t);
    };
    for (double t : f.breakpoints) add_cut(t);
    for (double t : dom.kink_times()) add_cut(t);
    std::sort(cuts.begin(), cuts.end());

    // 3-point Gauss-Legendre on [-1, 1]
    const double gx[3] = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

    std::vector<Vec2> out(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 xhat = rule.nodes[q];
        Vec2 acc;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double a = cuts[s], b = cuts[s + 1];
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (int g = 0; g < 3; ++g) {
                const double t = mid + half * gx[g];
                acc += (gw[g] * half * dom.scale_at(t)) * f(t, dom.map_point(t, xhat));
            }
        }
        out[q] = (1.0 / tau) * acc;
    }
    return out;
}

} // namespace ks::dom
