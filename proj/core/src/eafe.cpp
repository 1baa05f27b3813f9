#include "ks/eafe.hpp"

#include "ks/error.hpp"
#include "ks/log.hpp"

#include <cmath>

namespace ks::pde {

double bernoulli(double s) {
    if (s == 0.0) return 1.0;
    if (s > 0.0) return s * std::exp(-s) / (-std::expm1(-s));
    return s / std::expm1(s);
}

std::pair<double, double> eafe_edge_coefficient(double psi_i, double psi_j, double eps) {
    return {eps * bernoulli(psi_j - psi_i), eps * bernoulli(psi_i - psi_j)};
}

SparseOperator assemble_eafe(const TriMesh& mesh, const DriftField& drift, double eps) {
    if (static_cast<int>(drift.h2.size()) != mesh.n_vertices())
        throw ValidationError("eafe: drift field size mismatch");
    if (!(eps > 0.0)) throw ValidationError("eafe: diffusion coefficient must be positive");
    if (!mesh.nonobtuse())
        log_warn("eafe: mesh has obtuse angles; the discrete maximum principle may fail");

    std::vector<fem::Triplet> t;
    t.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 12);
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[k];
        const auto g = mesh.basis_gradients(k);
        const double area = mesh.triangle_area(k);
        for (int a = 0; a < 3; ++a) {
            const int b = (a + 1) % 3;
            const int i = tri[a], j = tri[b];
            const double omega = area * dot(g[a], g[b]); // <= 0 on nonobtuse cells
            const double psi_i = -drift.h2[i] / eps;
            const double psi_j = -drift.h2[j] / eps;
            const auto [ci, cj] = eafe_edge_coefficient(psi_i, psi_j, eps);
            // flux through the edge: omega * (ci * c_i - cj * c_j) leaving i
            t.push_back({i, i, -omega * ci});
            t.push_back({i, j, omega * cj});
            t.push_back({j, i, omega * ci});
            t.push_back({j, j, -omega * cj});
        }
    }
    return SparseOperator::from_triplets(mesh.n_vertices(), mesh.n_vertices(), std::move(t));
}

} // namespace ks::pde
