#pragma once

#include "ks/geom.hpp"

#include <vector>

namespace ks::pde {

// nodal drift data refreshed per time step from the optimized controls:
// the scalar potential |h|^2 and the force 2(grad h)^T h at every vertex
struct DriftField {
    std::vector<double> h2;
    std::vector<Vec2> force;

    static DriftField zero(int n_vertices) {
        DriftField d;
        d.h2.assign(n_vertices, 0.0);
        d.force.assign(n_vertices, Vec2{});
        return d;
    }
};

} // namespace ks::pde
