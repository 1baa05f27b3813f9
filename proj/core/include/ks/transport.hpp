#pragma once

#include "ks/drift.hpp"
#include "ks/eafe.hpp"
#include "ks/mesh.hpp"
#include "ks/sparse.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ks::pde {

enum class BoundaryKind { NeumannZeroFlux, DirichletZero };
enum class SteppingScheme { EafeImplicit, ExplicitLumped };
enum class MassVariant { Lumped, Consistent };

struct LinearSolverSettings {
    double rel_tol = 1e-10;
    int max_iters = 5000;
};

struct TransportSettings {
    double eps = 1e-5;  // diffusion coefficient
    double dt = 1e-3;   // time step
    double t_end = 1.0; // final time
    BoundaryKind bc = BoundaryKind::NeumannZeroFlux;
    SteppingScheme scheme = SteppingScheme::EafeImplicit;
    // mass operator in the implicit solve; lumped keeps the update an
    // M-matrix inverse, preserving positivity on nonobtuse meshes
    MassVariant mass = MassVariant::Lumped;
    LinearSolverSettings solver;
    double stability_safety = 0.9; // explicit scheme time step margin
    bool abort_on_stability = true;

    void validate() const;
};

// one implicit step: solve (M + dt K) c = M c_prev; rows listed in
// `dirichlet` are replaced by the identity with zero right-hand side
std::vector<double> implicit_step(const SparseOperator& mass, const SparseOperator& eafe_op,
                                  std::span<const double> c_prev, double dt,
                                  std::span<const int> dirichlet,
                                  const LinearSolverSettings& solver);

// Galerkin operator of the explicit scheme:
//   a(c, v) = eps grad c . grad v - c force . grad v
// with the force interpolated linearly from its nodal values
SparseOperator assemble_drift_galerkin(const TriMesh& mesh, const DriftField& drift, double eps);

// Rebuilds the Galerkin drift operator for many drift samples on one mesh.
// The sparsity pattern is fixed by the mesh, so a refill only rewrites the
// stored values instead of sorting and merging triplets every time.
class GalerkinDriftAssembler {
public:
    explicit GalerkinDriftAssembler(const TriMesh& mesh);

    // zero operator carrying the mesh pattern, ready for refill
    SparseOperator make_operator() const { return pattern_; }

    void refill(const DriftField& drift, double eps, SparseOperator& op) const;

private:
    const TriMesh* mesh_;
    SparseOperator pattern_;
    std::vector<int> slots_; // 9 value slots per triangle, row-major local (i, j)
};

// one explicit Euler step with the corrected lumped-mass inverse
//   c = c_prev - dt (2 I - Mbar^{-1} M) Mbar^{-1} A c_prev
// Dirichlet rows are pinned to zero
std::vector<double> explicit_step(const SparseOperator& mass, std::span<const double> lumped,
                                  const SparseOperator& drift_op, std::span<const double> c_prev,
                                  double dt, std::span<const int> dirichlet);

// largest stable explicit step: safety * min over free rows of
// lumped_i / sum_j |A_ij|
double stable_dt(std::span<const double> lumped, const SparseOperator& drift_op,
                 std::span<const int> dirichlet, double safety);

struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    Vec2 center_of_mass;
};

struct TransportResult {
    std::vector<fem::ScalarField> snapshots;
    std::vector<DiagnosticsRow> diagnostics; // one row per step plus the initial state
};

// fills the drift data for the requested time
using DriftProvider = std::function<void(double t, DriftField& out)>;

// March the concentration from c0 to t_end, refreshing the drift each step
// (implicit scheme: at the new time level; explicit: at the old one).
// Snapshots are taken at the requested times (nearest step) plus t = 0 and
// t_end; diagnostics are recorded every step.
TransportResult run_transport(const fem::TriMesh& mesh, const TransportSettings& settings,
                              std::vector<double> c0, const DriftProvider& drift,
                              std::span<const double> snapshot_times);

// nodal interpolation of a Gaussian bump exp(-|x - center|^2 / sigma2)
std::vector<double> gaussian_bump(const fem::TriMesh& mesh, const Vec2& center, double sigma2);

} // namespace ks::pde
