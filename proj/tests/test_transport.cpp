#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ks/assemble.hpp"
#include "ks/eafe.hpp"
#include "ks/error.hpp"
#include "ks/mesh.hpp"
#include "ks/transport.hpp"

using namespace ks;
using namespace ks::pde;

namespace {

fem::TriMesh square_mesh(double h) {
    fem::RectSpec r;
    r.center = {0.5, 0.5};
    return generate_mesh(r, h);
}

std::vector<std::vector<double>> to_dense(const fem::SparseOperator& a) {
    std::vector<std::vector<double>> d(a.rows, std::vector<double>(a.cols, 0.0));
    for (int i = 0; i < a.rows; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) d[i][a.col_idx[k]] += a.vals[k];
    }
    return d;
}

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

DriftField inward_drift(const fem::TriMesh& mesh, double strength) {
    auto d = DriftField::zero(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        const Vec2 r = mesh.vertices[i] - Vec2{0.5, 0.5};
        d.force[i] = -strength * r;           // pulls toward the center
        d.h2[i] = -0.5 * strength * norm2(r); // its potential, force = grad h2
    }
    return d;
}

} // namespace

TEST_CASE("implicit step matches a dense solve and conserves mass") {
    const auto mesh = square_mesh(0.2);
    const double eps = 1e-2, dt = 0.05;
    const auto drift = inward_drift(mesh, 3.0);
    const auto mass = fem::assemble_mass(mesh);
    const auto lumped = fem::lumped_mass(mass);
    const auto lumped_op = fem::diagonal_operator(lumped);
    const auto op = assemble_eafe(mesh, drift, eps);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::vector<double> c0(mesh.n_vertices());
    for (auto& v : c0) v = u(rng);

    LinearSolverSettings solver;
    solver.rel_tol = 1e-13;

    const auto c1 = implicit_step(lumped_op, op, c0, dt, {}, solver);

    SUBCASE("agrees with a dense factorization") {
        auto a = to_dense(lumped_op);
        const auto kd = to_dense(op);
        for (int i = 0; i < mass.rows; ++i)
            for (int j = 0; j < mass.cols; ++j) a[i][j] += dt * kd[i][j];
        const auto exact = dense_solve(a, lumped_op.multiply(c0));
        for (int i = 0; i < mass.rows; ++i)
            CHECK(c1[i] == doctest::Approx(exact[i]).epsilon(1e-8));
    }
    SUBCASE("total lumped mass is invariant without boundary outflow") {
        double m0 = 0, m1 = 0;
        for (int i = 0; i < mass.rows; ++i) {
            m0 += lumped[i] * c0[i];
            m1 += lumped[i] * c1[i];
        }
        CHECK(m1 == doctest::Approx(m0).epsilon(1e-10));
    }
    SUBCASE("nonnegative data stays nonnegative under strong drift") {
        auto c = c0;
        for (int s = 0; s < 20; ++s) c = implicit_step(lumped_op, op, c, dt, {}, solver);
        for (double v : c) CHECK(v >= -1e-12);
    }
    SUBCASE("dirichlet rows are pinned to zero") {
        const auto c = implicit_step(lumped_op, op, c0, dt, mesh.boundary_vertices, solver);
        for (int i : mesh.boundary_vertices) CHECK(c[i] == 0.0);
    }
}

TEST_CASE("explicit step applies the corrected mass inverse") {
    const auto mesh = square_mesh(0.25);
    const double eps = 1e-3, dt = 1e-4;
    const auto drift = inward_drift(mesh, 2.0);
    const auto mass = fem::assemble_mass(mesh);
    const auto lumped = fem::lumped_mass(mass);
    const auto op = assemble_drift_galerkin(mesh, drift, eps);

    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> c0(mesh.n_vertices());
    for (auto& v : c0) v = u(rng);

    const auto c1 = explicit_step(mass, lumped, op, c0, dt, mesh.boundary_vertices);

    // reference: c - dt * (2 z - Mbar^{-1} M z), z = Mbar^{-1} A c
    auto z = op.multiply(c0);
    for (int i = 0; i < mass.rows; ++i) z[i] /= lumped[i];
    const auto mz = mass.multiply(z);
    for (int i = 0; i < mass.rows; ++i) {
        double want = c0[i] - dt * (2.0 * z[i] - mz[i] / lumped[i]);
        for (int b : mesh.boundary_vertices)
            if (b == i) want = 0.0;
        CHECK(c1[i] == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("drift refill reproduces a fresh assembly") {
    const auto mesh = square_mesh(0.2);
    const double eps = 2e-3;
    const GalerkinDriftAssembler assembler(mesh);
    auto op = assembler.make_operator();

    for (double strength : {1.5, -0.75}) {
        const auto drift = inward_drift(mesh, strength);
        assembler.refill(drift, eps, op);
        const auto fresh = assemble_drift_galerkin(mesh, drift, eps);

        REQUIRE(op.nnz() == fresh.nnz());
        CHECK(op.row_ptr == fresh.row_ptr);
        CHECK(op.col_idx == fresh.col_idx);
        double scale = 0.0;
        for (double v : fresh.vals) scale = std::max(scale, std::abs(v));
        for (int k = 0; k < op.nnz(); ++k)
            CHECK(op.vals[k] == doctest::Approx(fresh.vals[k]).epsilon(1e-13).scale(scale));
    }

    SUBCASE("mismatched operator shape is rejected") {
        auto wrong = assembler.make_operator();
        wrong.vals.push_back(0.0);
        wrong.col_idx.push_back(0);
        const auto drift = inward_drift(mesh, 1.0);
        CHECK_THROWS_AS(assembler.refill(drift, eps, wrong), ValidationError);
    }
    SUBCASE("wrong drift size is rejected") {
        auto drift = inward_drift(mesh, 1.0);
        drift.force.pop_back();
        CHECK_THROWS_AS(assembler.refill(drift, eps, op), ValidationError);
    }
}

TEST_CASE("stability bound reflects row scaling") {
    const auto mesh = square_mesh(0.25);
    const auto drift = inward_drift(mesh, 2.0);
    const auto mass = fem::assemble_mass(mesh);
    const auto lumped = fem::lumped_mass(mass);
    const auto op = assemble_drift_galerkin(mesh, drift, 1e-3);

    const double bound = stable_dt(lumped, op, mesh.boundary_vertices, 0.9);
    CHECK(bound > 0.0);
    CHECK(std::isfinite(bound));

    std::vector<char> pinned(lumped.size(), 0);
    for (int i : mesh.boundary_vertices) pinned[i] = 1;
    double want = std::numeric_limits<double>::infinity();
    const auto dense = to_dense(op);
    for (int r = 0; r < op.rows; ++r) {
        if (pinned[r]) continue;
        double s = 0;
        for (double v : dense[r]) s += std::abs(v);
        if (s > 0) want = std::min(want, lumped[r] / s);
    }
    CHECK(bound == doctest::Approx(0.9 * want).epsilon(1e-14));
    // halving the safety factor halves the bound
    CHECK(stable_dt(lumped, op, mesh.boundary_vertices, 0.45) ==
          doctest::Approx(0.5 * bound).epsilon(1e-14));
}

TEST_CASE("settings validation") {
    TransportSettings s;
    CHECK_NOTHROW(s.validate());
    SUBCASE("explicit scheme needs dirichlet boundaries") {
        s.scheme = SteppingScheme::ExplicitLumped;
        s.bc = BoundaryKind::NeumannZeroFlux;
        CHECK_THROWS_AS(s.validate(), ValidationError);
        s.bc = BoundaryKind::DirichletZero;
        CHECK_NOTHROW(s.validate());
    }
    SUBCASE("positive parameters enforced") {
        s.dt = 0.0;
        CHECK_THROWS_AS(s.validate(), ValidationError);
        s.dt = 1e-3;
        s.eps = -1.0;
        CHECK_THROWS_AS(s.validate(), ValidationError);
        s.eps = 1e-5;
        s.stability_safety = 1.5;
        CHECK_THROWS_AS(s.validate(), ValidationError);
    }
}

TEST_CASE("transport run preserves a uniform state without drift") {
    const auto mesh = square_mesh(0.2);
    TransportSettings s;
    s.eps = 1e-3;
    s.dt = 0.05;
    s.t_end = 0.3;
    s.bc = BoundaryKind::NeumannZeroFlux;
    s.scheme = SteppingScheme::EafeImplicit;
    s.solver.rel_tol = 1e-13;

    auto provider = [](double, DriftField& d) {
        std::fill(d.h2.begin(), d.h2.end(), 0.0);
        std::fill(d.force.begin(), d.force.end(), Vec2{});
    };
    const auto res = run_transport(mesh, s, std::vector<double>(mesh.n_vertices(), 1.0),
                                   provider, {});
    REQUIRE(res.diagnostics.size() == 7); // rows at t = 0 and after each of 6 steps
    for (const auto& row : res.diagnostics) {
        CHECK(row.min_value == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(row.max_value == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(row.mass == doctest::Approx(1.0).epsilon(1e-11));
    }
    // initial and final states are always captured
    REQUIRE(res.snapshots.size() == 2);
    CHECK(res.snapshots.front().time == 0.0);
    CHECK(res.snapshots.back().time == doctest::Approx(0.3));
}

TEST_CASE("transport snapshots snap to the nearest step") {
    const auto mesh = square_mesh(0.35);
    TransportSettings s;
    s.eps = 1e-3;
    s.dt = 0.1;
    s.t_end = 1.0;
    s.bc = BoundaryKind::NeumannZeroFlux;
    s.solver.rel_tol = 1e-12;

    auto provider = [](double, DriftField&) {};
    const std::vector<double> want{0.0, 0.32, 0.78};
    const auto res = run_transport(mesh, s, gaussian_bump(mesh, {0.5, 0.5}, 0.02),
                                   provider, want);
    REQUIRE(res.snapshots.size() == 4); // 0, 0.3, 0.8, 1.0
    CHECK(res.snapshots[0].time == doctest::Approx(0.0));
    CHECK(res.snapshots[1].time == doctest::Approx(0.3));
    CHECK(res.snapshots[2].time == doctest::Approx(0.8));
    CHECK(res.snapshots[3].time == doctest::Approx(1.0));
}

TEST_CASE("provider sees implicit times at step ends and explicit times at starts") {
    const auto mesh = square_mesh(0.35);
    TransportSettings s;
    s.eps = 1e-3;
    s.dt = 0.25;
    s.t_end = 0.75;
    s.solver.rel_tol = 1e-12;

    std::vector<double> seen;
    auto provider = [&seen](double t, DriftField&) { seen.push_back(t); };

    SUBCASE("implicit evaluates the field at the new time") {
        s.bc = BoundaryKind::NeumannZeroFlux;
        s.scheme = SteppingScheme::EafeImplicit;
        run_transport(mesh, s, std::vector<double>(mesh.n_vertices(), 1.0), provider, {});
        REQUIRE(seen.size() == 3);
        CHECK(seen[0] == doctest::Approx(0.25));
        CHECK(seen[1] == doctest::Approx(0.50));
        CHECK(seen[2] == doctest::Approx(0.75));
    }
    SUBCASE("explicit evaluates the field at the old time") {
        s.bc = BoundaryKind::DirichletZero;
        s.scheme = SteppingScheme::ExplicitLumped;
        s.dt = 1e-4; // far below the stability limit for pure diffusion at this h
        s.t_end = 3e-4;
        run_transport(mesh, s, gaussian_bump(mesh, {0.5, 0.5}, 0.02), provider, {});
        REQUIRE(seen.size() == 3);
        CHECK(seen[0] == doctest::Approx(0.0));
        CHECK(seen[1] == doctest::Approx(1e-4));
        CHECK(seen[2] == doctest::Approx(2e-4));
    }
}

TEST_CASE("explicit run aborts past the stability limit unless told not to") {
    const auto mesh = square_mesh(0.2);
    TransportSettings s;
    s.eps = 0.5; // large diffusion forces a tiny stable step
    s.dt = 0.1;
    s.t_end = 0.2;
    s.bc = BoundaryKind::DirichletZero;
    s.scheme = SteppingScheme::ExplicitLumped;

    auto provider = [](double, DriftField&) {};
    auto c0 = gaussian_bump(mesh, {0.5, 0.5}, 0.05);
    CHECK_THROWS_AS((void)run_transport(mesh, s, c0, provider, {}), SolverError);

    s.abort_on_stability = false;
    CHECK_NOTHROW((void)run_transport(mesh, s, c0, provider, {}));
}

TEST_CASE("dirichlet run loses mass and keeps boundary at zero") {
    const auto mesh = square_mesh(0.15);
    TransportSettings s;
    s.eps = 5e-3;
    s.dt = 0.02;
    s.t_end = 0.2;
    s.bc = BoundaryKind::DirichletZero;
    s.scheme = SteppingScheme::EafeImplicit;
    s.solver.rel_tol = 1e-12;

    auto provider = [](double, DriftField&) {};
    const auto res = run_transport(mesh, s, gaussian_bump(mesh, {0.5, 0.5}, 0.03),
                                   provider, {});
    CHECK(res.diagnostics.back().mass < res.diagnostics.front().mass);
    CHECK(res.diagnostics.back().mass > 0.0);
    for (int i : mesh.boundary_vertices) CHECK(res.snapshots.back().values[i] == 0.0);
}

TEST_CASE("gaussian bump peaks at its center") {
    const auto mesh = square_mesh(0.1);
    const Vec2 center{0.3, 0.7};
    const auto c = gaussian_bump(mesh, center, 1e-3);
    int arg = 0;
    for (int i = 1; i < mesh.n_vertices(); ++i)
        if (c[i] > c[arg]) arg = i;
    CHECK(norm(mesh.vertices[arg] - center) < 0.1);
    for (double v : c) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
