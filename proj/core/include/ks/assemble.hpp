#pragma once

#include "ks/mesh.hpp"
#include "ks/sparse.hpp"

namespace ks::fem {

// consistent P1 mass matrix; per-triangle block (area/12) * [[2,1,1],[1,2,1],[1,1,2]]
SparseOperator assemble_mass(const TriMesh& mesh);

// diffusion stiffness with the coefficient folded in: eps * integral of
// grad(phi_j) . grad(phi_i)
SparseOperator assemble_stiffness(const TriMesh& mesh, double eps);

// diagonal of the lumped operator: row sums of the given matrix
std::vector<double> lumped_mass(const SparseOperator& mass);

} // namespace ks::fem
