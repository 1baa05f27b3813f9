#pragma once

#include "ks/scenario.hpp"

#include <iosfwd>
#include <string>

namespace ks::app {

struct OptimizeOutcome {
    obj::ControlTrajectory controls;
    opt::MinimizeResult result;
    obj::Breakdown start; // constant trajectory held at the initial controls
    obj::Breakdown warm;  // after the stepwise initialization pass
    obj::Breakdown best;  // at the accepted minimizer
};

obj::TrackingObjective build_objective(const Scenario& s, int threads);

// Initialization pass followed by the full-trajectory solve. Per-iteration
// rows (iter, J, tracking, smoothing terms, projected-gradient norm, step)
// stream to `iteration_log` when given.
OptimizeOutcome run_optimize(const Scenario& s, int threads, std::ostream* iteration_log = nullptr);

fem::TriMesh build_pde_mesh(const PdeBlock& block);

// nodal field magnitude and force from the controls active at time t
pde::DriftProvider make_drift_provider(const mag::DipoleConfig& dipoles,
                                       const obj::ControlTrajectory& controls,
                                       const fem::TriMesh& mesh, int threads);

struct SimulateOutcome {
    fem::TriMesh mesh;
    pde::TransportResult result;
    double dt = 0.0; // the step actually used (resolved when the scenario says "auto")
};

SimulateOutcome run_simulate(const Scenario& s, const obj::ControlTrajectory& controls,
                             int threads);

// artifact writers shared by the command line front end
void write_optimize_outputs(const Scenario& s, const OptimizeOutcome& out, const std::string& dir);
void write_simulate_outputs(const SimulateOutcome& out, const std::string& dir);

} // namespace ks::app
