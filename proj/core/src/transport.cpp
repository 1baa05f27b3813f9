#include "ks/transport.hpp"

#include "ks/assemble.hpp"
#include "ks/error.hpp"
#include "ks/log.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace ks::pde {

void TransportSettings::validate() const {
    if (!(eps > 0.0)) throw ValidationError("transport: eps must be positive");
    if (!(dt > 0.0)) throw ValidationError("transport: dt must be positive");
    if (!(t_end > 0.0)) throw ValidationError("transport: t_end must be positive");
    if (!(solver.rel_tol > 0.0) || solver.max_iters < 1)
        throw ValidationError("transport: bad linear solver settings");
    if (!(stability_safety > 0.0) || stability_safety > 1.0)
        throw ValidationError("transport: stability safety must be in (0, 1]");
    if (scheme == SteppingScheme::ExplicitLumped && bc != BoundaryKind::DirichletZero)
        throw ValidationError("transport: the explicit scheme requires Dirichlet boundaries");
}

std::vector<double> implicit_step(const SparseOperator& mass, const SparseOperator& eafe_op,
                                  std::span<const double> c_prev, double dt,
                                  std::span<const int> dirichlet,
                                  const LinearSolverSettings& solver) {
    const int n = mass.rows;
    std::vector<char> pinned(n, 0);
    for (int i : dirichlet) pinned[i] = 1;

    std::vector<fem::Triplet> t;
    t.reserve(static_cast<std::size_t>(mass.nnz() + eafe_op.nnz() + n));
    auto add = [&](const SparseOperator& m, double scale) {
        for (int r = 0; r < n; ++r) {
            if (pinned[r]) continue;
            for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
                t.push_back({r, m.col_idx[k], scale * m.vals[k]});
        }
    };
    add(mass, 1.0);
    add(eafe_op, dt);
    for (int i : dirichlet) t.push_back({i, i, 1.0});
    const SparseOperator system = SparseOperator::from_triplets(n, n, std::move(t));

    std::vector<double> rhs = mass.multiply(c_prev);
    for (int i : dirichlet) rhs[i] = 0.0;

    auto rep = fem::bicgstab(system, rhs, std::vector<double>(c_prev.begin(), c_prev.end()),
                             solver.rel_tol, solver.max_iters);
    for (int i : dirichlet) rep.x[i] = 0.0; // exact, not at solver accuracy
    return std::move(rep.x);
}

namespace {

// local block of a(c, v) on triangle k; entry (i, j) couples test function
// i with trial function j
std::array<double, 9> local_drift_block(const TriMesh& mesh, const DriftField& drift, double eps,
                                        int k) {
    const auto& tri = mesh.triangles[k];
    const auto g = mesh.basis_gradients(k);
    const double area = mesh.triangle_area(k);
    std::array<double, 9> block;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double v = eps * area * dot(g[i], g[j]);
            // - integral of phi_j (force . grad phi_i), force linear per cell
            for (int m = 0; m < 3; ++m) {
                const double mass_jm = area / 12.0 * (j == m ? 2.0 : 1.0);
                v -= mass_jm * dot(drift.force[tri[m]], g[i]);
            }
            block[3 * i + j] = v;
        }
    }
    return block;
}

} // namespace

SparseOperator assemble_drift_galerkin(const TriMesh& mesh, const DriftField& drift,
                                       double eps) {
    if (static_cast<int>(drift.force.size()) != mesh.n_vertices())
        throw ValidationError("drift operator: force field size mismatch");
    std::vector<fem::Triplet> t;
    t.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[k];
        const auto block = local_drift_block(mesh, drift, eps, k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.push_back({tri[i], tri[j], block[3 * i + j]});
    }
    return SparseOperator::from_triplets(mesh.n_vertices(), mesh.n_vertices(), std::move(t));
}

GalerkinDriftAssembler::GalerkinDriftAssembler(const TriMesh& mesh) : mesh_(&mesh) {
    std::vector<fem::Triplet> t;
    t.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[k];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.push_back({tri[i], tri[j], 0.0});
    }
    pattern_ = SparseOperator::from_triplets(mesh.n_vertices(), mesh.n_vertices(), std::move(t));

    slots_.resize(static_cast<std::size_t>(mesh.n_triangles()) * 9);
    for (int k = 0; k < mesh.n_triangles(); ++k) {
        const auto& tri = mesh.triangles[k];
        for (int i = 0; i < 3; ++i) {
            const auto row_begin = pattern_.col_idx.begin() + pattern_.row_ptr[tri[i]];
            const auto row_end = pattern_.col_idx.begin() + pattern_.row_ptr[tri[i] + 1];
            for (int j = 0; j < 3; ++j) {
                const auto it = std::lower_bound(row_begin, row_end, tri[j]);
                slots_[9 * k + 3 * i + j] = static_cast<int>(it - pattern_.col_idx.begin());
            }
        }
    }
}

void GalerkinDriftAssembler::refill(const DriftField& drift, double eps,
                                    SparseOperator& op) const {
    if (static_cast<int>(drift.force.size()) != mesh_->n_vertices())
        throw ValidationError("drift operator: force field size mismatch");
    if (op.rows != pattern_.rows || op.cols != pattern_.cols || op.nnz() != pattern_.nnz())
        throw ValidationError("drift operator: pattern does not match the mesh");
    std::fill(op.vals.begin(), op.vals.end(), 0.0);
    for (int k = 0; k < mesh_->n_triangles(); ++k) {
        const auto block = local_drift_block(*mesh_, drift, eps, k);
        for (int e = 0; e < 9; ++e) op.vals[slots_[9 * k + e]] += block[e];
    }
}

std::vector<double> explicit_step(const SparseOperator& mass, std::span<const double> lumped,
                                  const SparseOperator& drift_op, std::span<const double> c_prev,
                                  double dt, std::span<const int> dirichlet) {
    const int n = mass.rows;
    std::vector<double> z = drift_op.multiply(c_prev);
    for (int i = 0; i < n; ++i) z[i] /= lumped[i];
    // corrected inverse: (I + Mbar^{-1}(Mbar - M)) Mbar^{-1} = 2 Mbar^{-1} - Mbar^{-1} M Mbar^{-1}
    std::vector<double> mz = mass.multiply(z);
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = c_prev[i] - dt * (2.0 * z[i] - mz[i] / lumped[i]);
    for (int i : dirichlet) c[i] = 0.0;
    return c;
}

double stable_dt(std::span<const double> lumped, const SparseOperator& drift_op,
                 std::span<const int> dirichlet, double safety) {
    std::vector<char> pinned(lumped.size(), 0);
    for (int i : dirichlet) pinned[i] = 1;
    double bound = std::numeric_limits<double>::infinity();
    for (int r = 0; r < drift_op.rows; ++r) {
        if (pinned[r]) continue;
        const double s = drift_op.abs_row_sum(r);
        if (s > 0.0) bound = std::min(bound, lumped[r] / s);
    }
    return safety * bound;
}

std::vector<double> gaussian_bump(const fem::TriMesh& mesh, const Vec2& center, double sigma2) {
    std::vector<double> c(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i)
        c[i] = std::exp(-norm2(mesh.vertices[i] - center) / sigma2);
    return c;
}

namespace {

DiagnosticsRow diagnose(double t, const SparseOperator& mass, const fem::TriMesh& mesh,
                        std::span<const double> c) {
    DiagnosticsRow row;
    row.t = t;
    const std::vector<double> mc = mass.multiply(c);
    double total = 0.0;
    Vec2 first;
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        total += mc[i];
        first += mc[i] * mesh.vertices[i];
    }
    row.mass = total;
    row.center_of_mass = total != 0.0 ? (1.0 / total) * first : Vec2{};
    auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    row.min_value = *lo;
    row.max_value = *hi;
    return row;
}

} // namespace

TransportResult run_transport(const fem::TriMesh& mesh, const TransportSettings& settings,
                              std::vector<double> c0, const DriftProvider& drift_provider,
                              std::span<const double> snapshot_times) {
    settings.validate();
    const int n = mesh.n_vertices();
    if (static_cast<int>(c0.size()) != n)
        throw ValidationError("transport: initial state size mismatch");

    const SparseOperator mass = assemble_mass(mesh);
    const std::vector<double> lumped = lumped_mass(mass);
    const SparseOperator lumped_op = fem::diagonal_operator(lumped);

    std::vector<int> dirichlet;
    if (settings.bc == BoundaryKind::DirichletZero)
        dirichlet = mesh.boundary_vertices;
    for (int i : dirichlet) c0[i] = 0.0;

    const int n_steps = std::max(1, static_cast<int>(std::ceil(settings.t_end / settings.dt - 1e-9)));

    // pick the step closest to each requested snapshot time
    std::vector<char> snap_at(n_steps + 1, 0);
    snap_at[0] = snap_at[n_steps] = 1;
    for (double ts : snapshot_times) {
        const double frac = std::clamp(ts, 0.0, settings.t_end) / settings.t_end;
        snap_at[static_cast<int>(std::lround(frac * n_steps))] = 1;
    }

    TransportResult result;
    DriftField drift = DriftField::zero(n);
    std::vector<double> c = std::move(c0);
    bool warned_stability = false;

    std::optional<GalerkinDriftAssembler> drift_asm;
    SparseOperator galerkin_op;
    if (settings.scheme == SteppingScheme::ExplicitLumped) {
        drift_asm.emplace(mesh);
        galerkin_op = drift_asm->make_operator();
    }

    auto record = [&](int step, double t) {
        result.diagnostics.push_back(diagnose(t, mass, mesh, c));
        if (snap_at[step]) result.snapshots.push_back({t, c});
    };
    record(0, 0.0);

    for (int step = 1; step <= n_steps; ++step) {
        const double t_new = std::min(step * settings.dt, settings.t_end);
        const double dt = t_new - std::min((step - 1) * settings.dt, settings.t_end);

        if (settings.scheme == SteppingScheme::EafeImplicit) {
            drift_provider(t_new, drift);
            const SparseOperator op = assemble_eafe(mesh, drift, settings.eps);
            const SparseOperator& m =
                settings.mass == MassVariant::Lumped ? lumped_op : mass;
            try {
                c = implicit_step(m, op, c, dt, dirichlet, settings.solver);
            } catch (const SolverError& e) {
                throw SolverError("transport step " + std::to_string(step) + ": " + e.what());
            }
        } else {
            drift_provider(t_new - dt, drift);
            drift_asm->refill(drift, settings.eps, galerkin_op);
            const double dt_max =
                stable_dt(lumped, galerkin_op, dirichlet, settings.stability_safety);
            if (dt > dt_max) {
                if (settings.abort_on_stability)
                    throw SolverError("transport: explicit step " + std::to_string(step) +
                                      " exceeds the stability limit " + std::to_string(dt_max));
                if (!warned_stability) {
                    log_warn("transport: dt ", dt, " exceeds the stability limit ", dt_max);
                    warned_stability = true;
                }
            }
            c = explicit_step(mass, lumped, galerkin_op, c, dt, dirichlet);
        }
        record(step, t_new);
    }
    return result;
}

} // namespace ks::pde
