#include <benchmark/benchmark.h>

#include <cmath>

#include "ks/assemble.hpp"
#include "ks/eafe.hpp"
#include "ks/transport.hpp"

namespace {

ks::fem::TriMesh square_mesh(double h) {
    ks::fem::RectSpec spec;
    spec.width = 1.0;
    spec.height = 1.0;
    spec.center = {0.5, 0.5};
    return ks::fem::generate_mesh(spec, h);
}

ks::pde::DriftField swirl(const ks::fem::TriMesh& mesh, double eps) {
    auto drift = ks::pde::DriftField::zero(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        const auto& v = mesh.vertices[i];
        drift.force[i] = {-(v.y - 0.5), v.x - 0.5};
        drift.h2[i] = eps * (v.x * v.x + v.y * v.y);
    }
    return drift;
}

void eafe_assembly(benchmark::State& state) {
    const auto mesh = square_mesh(1.0 / static_cast<double>(state.range(0)));
    const double eps = 1e-3;
    const auto drift = swirl(mesh, eps);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks::pde::assemble_eafe(mesh, drift, eps));
    }
    state.SetItemsProcessed(state.iterations() * mesh.n_triangles());
}
BENCHMARK(eafe_assembly)->Arg(32)->Arg(128);

void galerkin_drift_assembly(benchmark::State& state) {
    const auto mesh = square_mesh(1.0 / static_cast<double>(state.range(0)));
    const double eps = 1e-3;
    const auto drift = swirl(mesh, eps);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks::pde::assemble_drift_galerkin(mesh, drift, eps));
    }
    state.SetItemsProcessed(state.iterations() * mesh.n_triangles());
}
BENCHMARK(galerkin_drift_assembly)->Arg(32)->Arg(128);

void galerkin_drift_refill(benchmark::State& state) {
    const auto mesh = square_mesh(1.0 / static_cast<double>(state.range(0)));
    const double eps = 1e-3;
    const auto drift = swirl(mesh, eps);
    const ks::pde::GalerkinDriftAssembler assembler(mesh);
    auto op = assembler.make_operator();
    for (auto _ : state) {
        assembler.refill(drift, eps, op);
        benchmark::DoNotOptimize(op.vals.data());
    }
    state.SetItemsProcessed(state.iterations() * mesh.n_triangles());
}
BENCHMARK(galerkin_drift_refill)->Arg(32)->Arg(128);

void implicit_transport_step(benchmark::State& state) {
    const auto mesh = square_mesh(1.0 / static_cast<double>(state.range(0)));
    const double eps = 1e-3;
    const auto drift = swirl(mesh, eps);
    const auto mass = ks::fem::assemble_mass(mesh);
    const auto lumped = ks::fem::lumped_mass(mass);
    const auto op = ks::pde::assemble_eafe(mesh, drift, eps);
    const auto mbar = ks::fem::diagonal_operator(lumped);
    std::vector<double> c(mesh.n_vertices(), 1.0);
    ks::pde::LinearSolverSettings solver;
    for (auto _ : state) {
        c = ks::pde::implicit_step(mbar, op, c, 1e-3, {}, solver);
    }
}
BENCHMARK(implicit_transport_step)->Arg(32)->Arg(64);

} // namespace
