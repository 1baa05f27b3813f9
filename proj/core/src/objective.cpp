#include "ks/objective.hpp"

#include "ks/error.hpp"
#include "ks/field.hpp"
#include "ks/log.hpp"
#include "ks/reduce.hpp"
#include "ks/threading.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ks::obj {

void ObjectiveConfig::validate() const {
    if (lambda < 0.0 || eta < 0.0 || beta < 0.0)
        throw ValidationError("objective weights must be nonnegative");
}

TrackingObjective::TrackingObjective(mag::DipoleConfig dipoles, dom::MovingDomain domain,
                                     dom::QuadratureRule rule, dom::TargetField target,
                                     ObjectiveConfig weights, int n_steps)
    : dipoles_(std::move(dipoles)),
      domain_(std::move(domain)),
      rule_(std::move(rule)),
      target_(std::move(target)),
      weights_(weights),
      n_(n_steps) {
    if (n_ < 1) throw ValidationError("objective: need at least one time step");
    dipoles_.validate();
    domain_.validate();
    weights_.validate();
    if (rule_.nodes.empty()) throw ValidationError("objective: empty quadrature rule");

    // the rule must live on the reference disk
    const Disk& ref = domain_.reference;
    for (const Vec2& p : rule_.nodes)
        if (norm(p - ref.center) > ref.radius * (1.0 + 1e-10))
            throw ValidationError("objective: quadrature node outside the reference disk");

    tau_ = domain_.t_end() / n_;
    points_.resize(n_);
    scale_.resize(n_);
    fhat_.resize(n_);
    double worst_excursion = 0.0;
    for (int n = 1; n <= n_; ++n) {
        const double t = std::min(n * tau_, domain_.t_end());
        scale_[n - 1] = domain_.scale_at(t);
        auto& pts = points_[n - 1];
        pts.resize(rule_.size());
        for (std::size_t q = 0; q < rule_.size(); ++q) {
            pts[q] = domain_.map_point(t, rule_.nodes[q]);
            if (dipoles_.keep_out && !dipoles_.keep_out->contains(pts[q])) {
                const double out = norm(pts[q] - dipoles_.keep_out->center) - dipoles_.keep_out->radius;
                worst_excursion = std::max(worst_excursion, out);
            }
        }
        fhat_[n - 1] = dom::time_averaged_target(target_, n, tau_, domain_, rule_);
    }
    // forces grow sharply toward the source belt, so straying far out of the working
    // region makes the tracking problem ill-behaved; a slight graze is tolerable
    if (worst_excursion > 0.0)
        log_warn("objective: tracked region leaves the working region by up to ", worst_excursion);
}

namespace {

void check_compatible(const TrackingObjective& obj, const ControlTrajectory& traj) {
    if (traj.dim != obj.node_dim() || traj.n_steps() != obj.n_steps())
        throw ValidationError("trajectory shape does not match the objective");
    if (std::abs(traj.tau - obj.tau()) > 1e-12 * std::max(1.0, obj.tau()))
        throw ValidationError("trajectory step size does not match the objective");
}

} // namespace

double TrackingObjective::step_misfit(int n, std::span<const double> controls) const {
    const auto states = dipoles_.states(controls);
    const auto& pts = points_[n - 1];
    const auto& fh = fhat_[n - 1];
    const double psi = scale_[n - 1];
    double acc = 0.0;
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const mag::FieldSample s = mag::eval_field(states, pts[q]);
        const Vec2 r = psi * s.kelvin - fh[q];
        acc += rule_.weights[q] * norm2(r);
    }
    return 0.5 * acc;
}

Breakdown TrackingObjective::eval(const ControlTrajectory& traj) const {
    check_compatible(*this, traj);
    std::vector<double> track(static_cast<std::size_t>(n_));
    parallel_for(n_, threads_,
                 [&](int i) { track[i] = step_misfit(i + 1, traj.node(i + 1)); });

    Breakdown b;
    b.tracking = tau_ * pairwise_sum(track);

    const int np = dipoles_.n_sources();
    double sa = 0.0, sp = 0.0;
    for (int n = 1; n <= n_; ++n) {
        const auto cur = traj.node(n), prev = traj.node(n - 1);
        for (int j = 0; j < np; ++j) {
            const double d = cur[j] - prev[j];
            sa += d * d;
        }
        for (int j = np; j < 2 * np; ++j) {
            const double d = cur[j] - prev[j];
            sp += d * d;
        }
    }
    b.intensity_smoothing = weights_.lambda / (2.0 * tau_) * sa;
    b.placement_smoothing = weights_.placement_weight(dipoles_.mode) / (2.0 * tau_) * sp;
    b.total = b.tracking + b.intensity_smoothing + b.placement_smoothing;
    return b;
}

DenseMat TrackingObjective::gradient(const ControlTrajectory& traj) const {
    check_compatible(*this, traj);
    const int np = dipoles_.n_sources();
    DenseMat g(n_, node_dim());

    parallel_for(n_, threads_, [&](int i) {
        const int n = i + 1;
        const auto c = traj.node(n);
        const auto& pts = points_[i];
        const auto& fh = fhat_[i];
        const double psi = scale_[i];
        mag::ForcePointEval fe;
        for (std::size_t q = 0; q < pts.size(); ++q) {
            mag::force_with_control_grad(dipoles_, c, pts[q], fe);
            const Vec2 r = psi * fe.kelvin - fh[q];
            const double w = tau_ * rule_.weights[q] * psi;
            for (int j = 0; j < np; ++j) {
                g(i, j) += w * dot(r, fe.d_intensity[j]);
                g(i, np + j) += w * dot(r, fe.d_placement[j]);
            }
        }
    });

    const double la = weights_.lambda / tau_;
    const double mu = weights_.placement_weight(dipoles_.mode) / tau_;
    for (int n = 1; n <= n_; ++n) {
        const auto cur = traj.node(n), prev = traj.node(n - 1);
        for (int j = 0; j < np; ++j) {
            g(n - 1, j) += la * (cur[j] - prev[j]);
            g(n - 1, np + j) += mu * (cur[np + j] - prev[np + j]);
        }
        if (n < n_) {
            const auto next = traj.node(n + 1);
            for (int j = 0; j < np; ++j) {
                g(n - 1, j) -= la * (next[j] - cur[j]);
                g(n - 1, np + j) -= mu * (next[np + j] - cur[np + j]);
            }
        }
    }
    return g;
}

std::vector<double> TrackingObjective::pack(const ControlTrajectory& traj) const {
    check_compatible(*this, traj);
    return {traj.values.begin() + traj.dim, traj.values.end()};
}

ControlTrajectory TrackingObjective::unpack(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != flat_dim())
        throw ValidationError("flattened control vector has the wrong size");
    ControlTrajectory traj = constant_trajectory();
    std::copy(x.begin(), x.end(), traj.values.begin() + traj.dim);
    return traj;
}

std::vector<double> TrackingObjective::flat_lower_bounds() const {
    const auto lo = dipoles_.lower_bounds();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(flat_dim()));
    for (int n = 0; n < n_; ++n) out.insert(out.end(), lo.begin(), lo.end());
    return out;
}

std::vector<double> TrackingObjective::flat_upper_bounds() const {
    const auto hi = dipoles_.upper_bounds();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(flat_dim()));
    for (int n = 0; n < n_; ++n) out.insert(out.end(), hi.begin(), hi.end());
    return out;
}

double TrackingObjective::step_eval(int n, std::span<const double> controls,
                                    std::span<const double> anchor, double kappa) const {
    const int np = dipoles_.n_sources();
    double v = step_misfit(n, controls);
    const double la = weights_.lambda / (2.0 * kappa * kappa);
    const double mu = weights_.placement_weight(dipoles_.mode) / (2.0 * kappa * kappa);
    for (int j = 0; j < np; ++j) {
        const double da = controls[j] - anchor[j];
        const double dp = controls[np + j] - anchor[np + j];
        v += la * da * da + mu * dp * dp;
    }
    return v;
}

void TrackingObjective::step_gradient(int n, std::span<const double> controls,
                                      std::span<const double> anchor, double kappa,
                                      std::span<double> out) const {
    const int np = dipoles_.n_sources();
    std::fill(out.begin(), out.end(), 0.0);
    const auto& pts = points_[n - 1];
    const auto& fh = fhat_[n - 1];
    const double psi = scale_[n - 1];
    mag::ForcePointEval fe;
    for (std::size_t q = 0; q < pts.size(); ++q) {
        mag::force_with_control_grad(dipoles_, controls, pts[q], fe);
        const Vec2 r = psi * fe.kelvin - fh[q];
        const double w = rule_.weights[q] * psi;
        for (int j = 0; j < np; ++j) {
            out[j] += w * dot(r, fe.d_intensity[j]);
            out[np + j] += w * dot(r, fe.d_placement[j]);
        }
    }
    const double la = weights_.lambda / (kappa * kappa);
    const double mu = weights_.placement_weight(dipoles_.mode) / (kappa * kappa);
    for (int j = 0; j < np; ++j) {
        out[j] += la * (controls[j] - anchor[j]);
        out[np + j] += mu * (controls[np + j] - anchor[np + j]);
    }
}

ControlTrajectory TrackingObjective::constant_trajectory() const {
    return ControlTrajectory::constant(dipoles_.initial_controls(), n_, tau_);
}

} // namespace ks::obj
