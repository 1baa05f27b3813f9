#pragma once

#include "ks/drift.hpp"
#include "ks/mesh.hpp"
#include "ks/sparse.hpp"

#include <utility>

namespace ks::pde {

using fem::SparseOperator;
using fem::TriMesh;

// B(s) = s / (e^s - 1), continuously extended with B(0) = 1.
// Overflow-safe on the whole real line: B(s) -> 0 as s -> +inf and
// B(s) -> -s as s -> -inf.
double bernoulli(double s);

// Edge coefficients of the exponentially fitted flux for an edge with
// endpoint exponent values psi_i, psi_j (psi linear along the edge):
// returns (eps * B(psi_j - psi_i), eps * B(psi_i - psi_j)), the weights
// multiplying c_i and c_j in the edge difference of e^psi c, harmonically
// averaged without ever forming e^psi.
std::pair<double, double> eafe_edge_coefficient(double psi_i, double psi_j, double eps);

// Edge-averaged finite element operator for
//   -div(eps grad c - c grad|h|^2)
// with exponent psi = -|h|^2 / eps built from the nodal potential values.
// On a nonobtuse mesh the result is an M-matrix with zero column sums
// (discrete mass conservation); an obtuse mesh only triggers a warning.
SparseOperator assemble_eafe(const TriMesh& mesh, const DriftField& drift, double eps);

} // namespace ks::pde
