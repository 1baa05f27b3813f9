#pragma once

#include "ks/geom.hpp"

#include <vector>

namespace ks::dom {

struct QuadratureRule {
    std::vector<Vec2> nodes;
    std::vector<double> weights; // positive, summing to the region area

    std::size_t size() const { return nodes.size(); }
};

// Centroid rule on a structured triangulation of the disk |x| <= radius:
// a 12-sector fan refined by 4-way subdivision with boundary points kept on
// the circle. Weights are triangle areas rescaled so they sum to the exact
// disk area. Node count is 12 * 4^(refinement-1).
QuadratureRule disk_quadrature(double radius, int refinement);

// same rule shifted to a non-origin disk
QuadratureRule disk_quadrature(const Disk& disk, int refinement);

} // namespace ks::dom
