#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "ks/assemble.hpp"
#include "ks/eafe.hpp"
#include "ks/error.hpp"
#include "ks/mesh.hpp"
#include "ks/sparse.hpp"

using namespace ks;
using namespace ks::fem;

namespace {

TriMesh reference_triangle() {
    TriMesh m;
    m.vertices = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.finalize();
    return m;
}

TriMesh square_mesh(double h) {
    RectSpec r;
    r.width = 1.0;
    r.height = 1.0;
    r.center = {0.5, 0.5};
    return generate_mesh(r, h);
}

std::vector<std::vector<double>> to_dense(const SparseOperator& a) {
    std::vector<std::vector<double>> d(a.rows, std::vector<double>(a.cols, 0.0));
    for (int i = 0; i < a.rows; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) d[i][a.col_idx[k]] += a.vals[k];
    }
    return d;
}

// plain Gaussian elimination with partial pivoting, for small oracles
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

pde::DriftField swirl_drift(const TriMesh& mesh, double eps, double strength) {
    auto d = pde::DriftField::zero(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        const auto& v = mesh.vertices[i];
        d.force[i] = {strength * (v.y - 0.5), strength * (0.5 - v.x)};
        d.h2[i] = eps * strength * (v.x + 2 * v.y); // psi stays order `strength`
    }
    return d;
}

} // namespace

TEST_CASE("triplets merge and bounds are checked") {
    std::vector<Triplet> t{{0, 0, 1.0}, {0, 1, 2.0}, {0, 0, 3.0}, {1, 1, -1.0}};
    const auto a = SparseOperator::from_triplets(2, 2, t);
    CHECK(a.nnz() == 3);
    const auto d = to_dense(a);
    CHECK(d[0][0] == 4.0);
    CHECK(d[0][1] == 2.0);
    CHECK(d[1][0] == 0.0);
    CHECK(d[1][1] == -1.0);

    const auto y = a.multiply(std::vector<double>{1.0, 2.0});
    CHECK(y[0] == 8.0);
    CHECK(y[1] == -2.0);
    CHECK(a.diagonal() == std::vector<double>{4.0, -1.0});
    CHECK(a.row_sums() == std::vector<double>{6.0, -1.0});

    CHECK_THROWS_AS((void)SparseOperator::from_triplets(2, 2, {{2, 0, 1.0}}), ValidationError);
}

TEST_CASE("mass matrix on the reference triangle") {
    const auto m = assemble_mass(reference_triangle());
    const auto d = to_dense(m);
    const double area = 0.5;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double want = (i == j ? 2.0 : 1.0) * area / 12.0;
            CHECK(d[i][j] == doctest::Approx(want).epsilon(1e-15));
        }
    }
    const auto lumped = lumped_mass(m);
    for (double v : lumped) CHECK(v == doctest::Approx(area / 3).epsilon(1e-15));
}

TEST_CASE("mass integrates to the domain area") {
    const auto mesh = square_mesh(0.25);
    const auto m = assemble_mass(mesh);
    std::vector<double> one(mesh.n_vertices(), 1.0);
    const auto mi = m.multiply(one);
    double total = 0;
    for (double v : mi) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("stiffness reproduces the dirichlet energy of linears") {
    const auto mesh = square_mesh(0.25);
    const double eps = 0.7;
    const auto k = assemble_stiffness(mesh, eps);
    // u = 2x - y: |grad u|^2 = 5, energy = eps * 5 * area
    std::vector<double> u(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        u[i] = 2 * mesh.vertices[i].x - mesh.vertices[i].y;
    }
    const auto ku = k.multiply(u);
    double energy = 0;
    for (int i = 0; i < mesh.n_vertices(); ++i) energy += u[i] * ku[i];
    CHECK(energy == doctest::Approx(eps * 5.0).epsilon(1e-12));
    // constants are in the kernel
    for (double s : k.row_sums()) CHECK(std::abs(s) < 1e-13);
}

TEST_CASE("bicgstab matches a dense solve") {
    const auto mesh = square_mesh(0.25);
    const auto m = assemble_mass(mesh);
    const auto k = assemble_stiffness(mesh, 1.0);
    // SPD system (M + K) x = b
    std::vector<Triplet> t;
    for (int i = 0; i < m.rows; ++i) {
        for (int p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
            t.push_back({i, m.col_idx[p], m.vals[p]});
        }
        for (int p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p) {
            t.push_back({i, k.col_idx[p], k.vals[p]});
        }
    }
    const auto a = SparseOperator::from_triplets(m.rows, m.cols, std::move(t));
    std::mt19937 rng(67);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> b(a.rows);
    for (auto& v : b) v = u(rng);

    const auto report = bicgstab(a, b, std::vector<double>(a.rows, 0.0), 1e-12, 2000);
    CHECK(report.converged);
    CHECK(report.residual <= 1e-12);
    const auto exact = dense_solve(to_dense(a), b);
    for (int i = 0; i < a.rows; ++i) {
        CHECK(report.x[i] == doctest::Approx(exact[i]).epsilon(1e-8));
    }

    SUBCASE("zero right hand side short circuits") {
        const auto z = bicgstab(a, std::vector<double>(a.rows, 0.0),
                                std::vector<double>(a.rows, 1.0), 1e-12, 10);
        CHECK(z.converged);
        for (double v : z.x) CHECK(v == 0.0);
    }
    SUBCASE("iteration cap raises a solver failure") {
        CHECK_THROWS_AS((void)bicgstab(a, b, std::vector<double>(a.rows, 0.0), 1e-14, 1),
                        SolverError);
    }
}

TEST_CASE("bernoulli function across all regimes") {
    CHECK(pde::bernoulli(0.0) == 1.0);
    // reflection identity B(-s) = B(s) + s
    for (double s : {1e-8, 1e-3, 0.5, 2.0, 30.0, 500.0}) {
        CHECK(pde::bernoulli(-s) ==
              doctest::Approx(pde::bernoulli(s) + s).epsilon(1e-13));
    }
    // asymptotics without overflow
    CHECK(pde::bernoulli(750.0) >= 0.0);
    CHECK(pde::bernoulli(750.0) < 1e-300);
    CHECK(pde::bernoulli(-750.0) == doctest::Approx(750.0).epsilon(1e-13));
    // small-argument expansion B(s) ~ 1 - s/2
    CHECK(pde::bernoulli(1e-9) == doctest::Approx(1.0 - 5e-10).epsilon(1e-12));

    const auto [ci, cj] = pde::eafe_edge_coefficient(2.0, 5.0, 0.1);
    CHECK(ci == doctest::Approx(0.1 * pde::bernoulli(3.0)).epsilon(1e-15));
    CHECK(cj == doctest::Approx(0.1 * pde::bernoulli(-3.0)).epsilon(1e-15));
}

TEST_CASE("zero drift reduces to the diffusion operator") {
    const auto mesh = square_mesh(0.2);
    const double eps = 3e-4;
    const auto drift = pde::DriftField::zero(mesh.n_vertices());
    const auto k_eafe = pde::assemble_eafe(mesh, drift, eps);
    const auto k_diff = assemble_stiffness(mesh, eps);
    const auto da = to_dense(k_eafe);
    const auto db = to_dense(k_diff);
    double max_diff = 0, scale = 0;
    for (int i = 0; i < k_eafe.rows; ++i) {
        for (int j = 0; j < k_eafe.cols; ++j) {
            max_diff = std::max(max_diff, std::abs(da[i][j] - db[i][j]));
            scale = std::max(scale, std::abs(db[i][j]));
        }
    }
    CHECK(max_diff <= 1e-13 * scale);
}

TEST_CASE("eafe conserves mass and is monotone") {
    const auto mesh = square_mesh(0.1);
    const double eps = 1e-3;
    const auto drift = swirl_drift(mesh, eps, 4.0);
    const auto k = pde::assemble_eafe(mesh, drift, eps);

    // column sums vanish: total mass is invariant under the flux
    std::vector<double> colsum(k.cols, 0.0);
    double scale = 0;
    for (int i = 0; i < k.rows; ++i) {
        for (int p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p) {
            colsum[k.col_idx[p]] += k.vals[p];
            scale = std::max(scale, std::abs(k.vals[p]));
        }
    }
    for (double s : colsum) CHECK(std::abs(s) <= 1e-13 * scale);

    // M-matrix signs on a nonobtuse mesh
    REQUIRE(mesh.nonobtuse(1e-9));
    const auto dense = to_dense(k);
    for (int i = 0; i < k.rows; ++i) {
        CHECK(dense[i][i] >= 0.0);
        for (int j = 0; j < k.cols; ++j) {
            if (i != j) CHECK(dense[i][j] <= 1e-15 * scale);
        }
    }
}

TEST_CASE("eafe annihilates the boltzmann equilibrium") {
    const auto mesh = square_mesh(0.125);
    const double eps = 0.05;
    const auto drift = swirl_drift(mesh, eps, 2.5);
    const auto k = pde::assemble_eafe(mesh, drift, eps);

    std::vector<double> c(mesh.n_vertices());
    double cmax = 0;
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        c[i] = std::exp(drift.h2[i] / eps); // e^{-psi}
        cmax = std::max(cmax, c[i]);
    }
    const auto kc = k.multiply(c);
    double scale = 0;
    for (int i = 0; i < k.rows; ++i) scale = std::max(scale, k.abs_row_sum(i));
    for (double v : kc) CHECK(std::abs(v) <= 1e-12 * scale * cmax);
}
