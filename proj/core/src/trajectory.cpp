#include "ks/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace ks::obj {

std::vector<double> ControlTrajectory::at_time(double t) const {
    const int n = n_steps();
    const double s = std::clamp(t / tau, 0.0, static_cast<double>(n));
    const int k = std::min(static_cast<int>(s), n - 1);
    const double w = s - k;
    std::vector<double> out(static_cast<std::size_t>(dim));
    const auto a = node(k), b = node(k + 1);
    for (int j = 0; j < dim; ++j) out[j] = (1.0 - w) * a[j] + w * b[j];
    return out;
}

ControlTrajectory ControlTrajectory::constant(std::span<const double> x0, int n_steps,
                                              double tau) {
    ControlTrajectory traj;
    traj.tau = tau;
    traj.dim = static_cast<int>(x0.size());
    traj.values.resize(static_cast<std::size_t>(n_steps + 1) * x0.size());
    for (int n = 0; n <= n_steps; ++n)
        std::copy(x0.begin(), x0.end(), traj.node(n).begin());
    return traj;
}

} // namespace ks::obj
