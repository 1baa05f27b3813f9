#include "ks/assemble.hpp"

namespace ks::fem {

SparseOperator assemble_mass(const TriMesh& mesh) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[k];
        const double a = mesh.triangle_area(k) / 12.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                t.push_back({tri[i], tri[j], a * (i == j ? 2.0 : 1.0)});
    }
    return SparseOperator::from_triplets(mesh.n_vertices(), mesh.n_vertices(), std::move(t));
}

SparseOperator assemble_stiffness(const TriMesh& mesh, double eps) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[k];
        const auto g = mesh.basis_gradients(k);
        const double a = eps * mesh.triangle_area(k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                t.push_back({tri[i], tri[j], a * dot(g[i], g[j])});
    }
    return SparseOperator::from_triplets(mesh.n_vertices(), mesh.n_vertices(), std::move(t));
}

std::vector<double> lumped_mass(const SparseOperator& mass) { return mass.row_sums(); }

} // namespace ks::fem
