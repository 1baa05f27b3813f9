#pragma once

#include "ks/dense.hpp"
#include "ks/dipole.hpp"
#include "ks/moving_domain.hpp"
#include "ks/quadrature.hpp"
#include "ks/target_field.hpp"
#include "ks/trajectory.hpp"

#include <span>
#include <vector>

namespace ks::obj {

struct ObjectiveConfig {
    double lambda = 1e-5; // intensity smoothing weight
    double eta = 1e-5;    // direction-angle smoothing weight
    double beta = 1e-5;   // curve-parameter smoothing weight

    double placement_weight(mag::ControlMode mode) const {
        return mode == mag::ControlMode::IntensityDirection ? eta : beta;
    }
    void validate() const;
};

struct Breakdown {
    double total = 0.0;
    double tracking = 0.0;            // misfit between realized force and target
    double intensity_smoothing = 0.0; // scaled squared intensity increments
    double placement_smoothing = 0.0; // scaled squared placement increments
};

// Discrete tracking functional over a control trajectory:
//   tau * sum_n  1/2 * sum_q w_q |psi_n * force(X(t_n, xhat_q); c_n) - fhat_n(xhat_q)|^2
// + (lambda / (2 tau)) * sum_n |intensity increment|^2
// + (mu / (2 tau)) * sum_n |placement increment|^2
// where psi_n is the domain scale at t_n and fhat the scale-weighted
// time-averaged pullback of the target. Gradients are exact derivatives of
// this discrete sum.
class TrackingObjective {
public:
    TrackingObjective(mag::DipoleConfig dipoles, dom::MovingDomain domain,
                      dom::QuadratureRule rule, dom::TargetField target, ObjectiveConfig weights,
                      int n_steps);

    int n_steps() const { return n_; }
    int node_dim() const { return dipoles_.control_dim(); }
    int flat_dim() const { return n_ * node_dim(); }
    double tau() const { return tau_; }
    const mag::DipoleConfig& dipoles() const { return dipoles_; }
    const dom::MovingDomain& domain() const { return domain_; }
    const ObjectiveConfig& weights() const { return weights_; }

    // worker threads used for the per-step loops; results are bit-identical
    // for any setting
    void set_threads(int t) { threads_ = t < 1 ? 1 : t; }

    Breakdown eval(const ControlTrajectory& traj) const;
    // rows = free nodes 1..n_steps, columns = controls within a node
    DenseMat gradient(const ControlTrajectory& traj) const;

    // flattened view of the free nodes, row-major, for the optimizer
    std::vector<double> pack(const ControlTrajectory& traj) const;
    ControlTrajectory unpack(std::span<const double> x) const;
    std::vector<double> flat_lower_bounds() const;
    std::vector<double> flat_upper_bounds() const;

    // Single-step objective for the horizon initializer: the step-n misfit
    //   1/2 * sum_q w_q |psi_n * force - fhat_n|^2
    // plus proximal terms (weight / (2 kappa^2)) * |c - anchor|^2 per block.
    double step_eval(int n, std::span<const double> controls, std::span<const double> anchor,
                     double kappa) const;
    void step_gradient(int n, std::span<const double> controls, std::span<const double> anchor,
                       double kappa, std::span<double> out) const;

    const std::vector<Vec2>& averaged_target(int n) const { return fhat_[n - 1]; }
    ControlTrajectory constant_trajectory() const;

private:
    double step_misfit(int n, std::span<const double> controls) const;

    mag::DipoleConfig dipoles_;
    dom::MovingDomain domain_;
    dom::QuadratureRule rule_;
    dom::TargetField target_;
    ObjectiveConfig weights_;
    int n_ = 0;
    double tau_ = 0.0;
    int threads_ = 1;

    // per step n = 1..N: mapped quadrature nodes, scale factor, averaged target
    std::vector<std::vector<Vec2>> points_;
    std::vector<double> scale_;
    std::vector<std::vector<Vec2>> fhat_;
};

} // namespace ks::obj
