#pragma once

#include <span>
#include <vector>

namespace ks::obj {

// nodal control values on a uniform time grid t_n = n * tau, n = 0..n_steps;
// node 0 is the fixed initial state, not a decision variable
struct ControlTrajectory {
    double tau = 0.0;
    int dim = 0;                // controls per node
    std::vector<double> values; // (n_steps+1) x dim, row-major

    int n_nodes() const { return dim == 0 ? 0 : static_cast<int>(values.size()) / dim; }
    int n_steps() const { return n_nodes() - 1; }
    double t_end() const { return n_steps() * tau; }

    std::span<double> node(int n) {
        return {values.data() + static_cast<std::size_t>(n) * dim, static_cast<std::size_t>(dim)};
    }
    std::span<const double> node(int n) const {
        return {values.data() + static_cast<std::size_t>(n) * dim, static_cast<std::size_t>(dim)};
    }

    // piecewise-linear interpolation between nodes; clamps to [0, t_end]
    std::vector<double> at_time(double t) const;

    static ControlTrajectory constant(std::span<const double> x0, int n_steps, double tau);
};

} // namespace ks::obj
