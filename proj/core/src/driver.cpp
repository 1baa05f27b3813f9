#include "ks/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "ks/assemble.hpp"
#include "ks/controls_io.hpp"
#include "ks/error.hpp"
#include "ks/field.hpp"
#include "ks/log.hpp"
#include "ks/threading.hpp"
#include "ks/vtk.hpp"

namespace ks::app {

namespace {

namespace fs = std::filesystem;

void write_breakdown(std::ostream& out, const char* label, const obj::Breakdown& b) {
    out << label << ": total " << b.total << " = tracking " << b.tracking << " + intensity "
        << b.intensity_smoothing << " + placement " << b.placement_smoothing << "\n";
}

struct GridBox {
    double lo_x, lo_y, hi_x, hi_y;
};

GridBox force_grid_box(const Scenario& s) {
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_y;
    auto take = [&](const Disk& d) {
        lo_x = std::min(lo_x, d.center.x - d.radius);
        lo_y = std::min(lo_y, d.center.y - d.radius);
        hi_x = std::max(hi_x, d.center.x + d.radius);
        hi_y = std::max(hi_y, d.center.y + d.radius);
    };
    if (s.dipoles.keep_out) {
        take(*s.dipoles.keep_out);
    } else {
        for (int k = 0; k <= 64; ++k) take(s.domain.region_at(s.t_end() * k / 64.0));
    }
    const double pad = 0.15 * std::max(hi_x - lo_x, hi_y - lo_y);
    return {lo_x - pad, lo_y - pad, hi_x + pad, hi_y + pad};
}

void write_force_grid(const Scenario& s, const obj::ControlTrajectory& traj,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open force grid file for writing: " + path);
    out << std::setprecision(10);
    out << "t,x,y,fx,fy,h2\n";
    const GridBox box = force_grid_box(s);
    const int n = 41;
    const double times[3] = {0.0, 0.5 * s.t_end(), s.t_end()};
    for (double t : times) {
        const auto states = s.dipoles.states(traj.at_time(t));
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const Vec2 x{box.lo_x + (box.hi_x - box.lo_x) * ix / (n - 1),
                             box.lo_y + (box.hi_y - box.lo_y) * iy / (n - 1)};
                const auto sample = mag::eval_field(states, x);
                out << t << "," << x.x << "," << x.y << "," << sample.kelvin.x << ","
                    << sample.kelvin.y << "," << dot(sample.h, sample.h) << "\n";
            }
        }
    }
}

// sampled explicit stability bound over the run, with headroom for the
// times between samples
double auto_explicit_dt(const Scenario& s, const fem::TriMesh& mesh,
                        const pde::DriftProvider& provider) {
    const auto mass = fem::assemble_mass(mesh);
    const auto lumped = fem::lumped_mass(mass);
    std::span<const int> dirichlet;
    if (s.pde->settings.bc == pde::BoundaryKind::DirichletZero) {
        dirichlet = mesh.boundary_vertices;
    }
    auto drift = pde::DriftField::zero(mesh.n_vertices());
    double bound = std::numeric_limits<double>::infinity();
    const int samples = 33;
    for (int k = 0; k < samples; ++k) {
        provider(s.t_end() * k / (samples - 1), drift);
        const auto op = pde::assemble_drift_galerkin(mesh, drift, s.pde->settings.eps);
        bound = std::min(bound,
                         pde::stable_dt(lumped, op, dirichlet, s.pde->settings.stability_safety));
    }
    const double dt = bound * (5.0 / 6.0);
    log_info("auto time step: ", dt, " (sampled stability bound ", bound, ")");
    return dt;
}

} // namespace

obj::TrackingObjective build_objective(const Scenario& s, int threads) {
    auto rule = dom::disk_quadrature(s.domain.reference, s.quadrature_refinement);
    obj::TrackingObjective objective(s.dipoles, s.domain, std::move(rule), s.target, s.weights,
                                     s.n_steps);
    objective.set_threads(threads);
    return objective;
}

OptimizeOutcome run_optimize(const Scenario& s, int threads, std::ostream* iteration_log) {
    auto objective = build_objective(s, threads);

    OptimizeOutcome out;
    out.start = objective.eval(objective.constant_trajectory());
    log_info("objective at constant controls: ", out.start.total);

    auto warm = opt::init_horizon(objective, s.horizon);
    out.warm = objective.eval(warm);
    log_info("objective after initialization pass: ", out.warm.total);

    opt::BoxBounds bounds{objective.flat_lower_bounds(), objective.flat_upper_bounds()};

    obj::Breakdown last;
    opt::ObjectiveFn f = [&](std::span<const double> x) {
        last = objective.eval(objective.unpack(x));
        return last.total;
    };
    opt::GradientFn g = [&](std::span<const double> x, std::span<double> grad) {
        const auto m = objective.gradient(objective.unpack(x));
        std::copy(m.a.begin(), m.a.end(), grad.begin());
    };
    opt::IterationCallback cb;
    if (iteration_log) {
        *iteration_log << std::setprecision(12)
                       << "iter,J,tracking,intensity_smoothing,placement_smoothing,pg_norm,step\n";
        cb = [&](const opt::IterationRecord& r) {
            // the optimizer's last objective evaluation is the accepted iterate
            *iteration_log << r.iter << "," << last.total << "," << last.tracking << ","
                           << last.intensity_smoothing << "," << last.placement_smoothing << ","
                           << r.pg_norm << "," << r.step << "\n";
        };
    }

    out.result = opt::minimize(f, g, objective.pack(warm), bounds, s.optimizer, cb);
    out.controls = objective.unpack(out.result.x);
    out.best = objective.eval(out.controls);
    log_info("objective after full solve: ", out.best.total, " (",
             opt::to_string(out.result.status), ", ", out.result.iterations, " iterations)");
    return out;
}

fem::TriMesh build_pde_mesh(const PdeBlock& block) {
    return fem::generate_mesh(block.mesh_spec, block.target_h);
}

pde::DriftProvider make_drift_provider(const mag::DipoleConfig& dipoles,
                                       const obj::ControlTrajectory& controls,
                                       const fem::TriMesh& mesh, int threads) {
    // the mesh is captured by pointer and must outlive the provider
    const fem::TriMesh* m = &mesh;
    return [cfg = dipoles, traj = controls, m, threads](double t, pde::DriftField& out) {
        const auto states = cfg.states(traj.at_time(t));
        parallel_for(m->n_vertices(), threads, [&](int i) {
            const auto sample = mag::eval_field(states, m->vertices[i]);
            out.h2[i] = dot(sample.h, sample.h);
            out.force[i] = sample.kelvin;
        });
    };
}

SimulateOutcome run_simulate(const Scenario& s, const obj::ControlTrajectory& controls,
                             int threads) {
    if (!s.pde) throw ValidationError("scenario has no pde block");
    if (controls.dim != s.dipoles.control_dim()) {
        throw ValidationError("controls have " + std::to_string(controls.dim) +
                              " columns, scenario needs " +
                              std::to_string(s.dipoles.control_dim()));
    }
    if (controls.t_end() + 1e-9 * std::max(1.0, s.t_end()) < s.t_end()) {
        throw ValidationError("controls cover [0, " + std::to_string(controls.t_end()) +
                              "] but the run ends at " + std::to_string(s.t_end()));
    }

    SimulateOutcome out;
    out.mesh = build_pde_mesh(*s.pde);
    log_info("pde mesh: ", out.mesh.n_vertices(), " vertices, ", out.mesh.n_triangles(),
             " triangles");
    const auto provider = make_drift_provider(s.dipoles, controls, out.mesh, threads);

    auto settings = s.pde->settings;
    settings.t_end = s.t_end();
    if (s.pde->auto_dt) settings.dt = auto_explicit_dt(s, out.mesh, provider);
    out.dt = settings.dt;

    auto c0 = pde::gaussian_bump(out.mesh, s.pde->initial_center, s.pde->initial_sigma2);
    out.result =
        pde::run_transport(out.mesh, settings, std::move(c0), provider, s.pde->snapshot_times);
    return out;
}

void write_optimize_outputs(const Scenario& s, const OptimizeOutcome& out,
                            const std::string& dir) {
    fs::create_directories(dir);
    write_controls_file(dir + "/controls.csv", out.controls, s.dipoles.mode);
    write_force_grid(s, out.controls, dir + "/force_grid.csv");

    std::ofstream sum(dir + "/summary.txt");
    if (!sum) throw ValidationError("cannot open summary file for writing");
    sum << std::setprecision(12);
    sum << "scenario: " << s.name << "\n";
    write_breakdown(sum, "constant controls", out.start);
    write_breakdown(sum, "after initialization", out.warm);
    write_breakdown(sum, "after full solve", out.best);
    sum << "status: " << opt::to_string(out.result.status) << "\n";
    sum << "iterations: " << out.result.iterations << "\n";
    sum << "projected gradient norm: " << out.result.pg_norm << "\n";
}

void write_simulate_outputs(const SimulateOutcome& out, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream index(dir + "/snapshot_index.csv");
    if (!index) throw ValidationError("cannot open snapshot index for writing");
    index << std::setprecision(12) << "file,t\n";
    for (std::size_t i = 0; i < out.result.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03zu.vtk", i);
        pde::write_vtk(dir + "/" + name, out.mesh, out.result.snapshots[i]);
        index << name << "," << out.result.snapshots[i].time << "\n";
    }
    pde::write_diagnostics_csv(dir + "/diagnostics.csv", out.result.diagnostics);
}

} // namespace ks::app
