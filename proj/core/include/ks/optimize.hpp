#pragma once

#include "ks/objective.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ks::opt {

struct BoxBounds {
    std::vector<double> lower, upper;

    void validate() const; // sizes match, lower <= upper
    bool contains(std::span<const double> x) const;
};

std::vector<double> project(std::span<const double> x, const BoxBounds& b);

struct ArmijoSettings {
    double c1 = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
};

struct OptimizerSettings {
    double grad_tol = 1e-6; // on the l2 norm of the projected gradient
    int max_iters = 1000;
    ArmijoSettings armijo;
    int bfgs_memory = 0; // 0 = dense inverse-Hessian update, otherwise limited memory

    void validate() const;
};

enum class OptStatus { Converged, MaxIterations, Stalled };

const char* to_string(OptStatus s);

struct IterationRecord {
    int iter = 0;
    double value = 0.0;
    double pg_norm = 0.0;
    double step = 0.0; // accepted line-search step length (0 for the initial record)
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    OptStatus status = OptStatus::Converged;
    double pg_norm = 0.0;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;
using IterationCallback = std::function<void(const IterationRecord&)>;

// Projected BFGS with backtracking Armijo line search on the projected path
// x(t) = project(x + t d). Active coordinates (at a bound with the gradient
// pushing outward) move along the negative gradient; the quasi-Newton model
// covers the free coordinates and is reset whenever the active set changes.
// Curvature pairs are accepted only when s·y > 1e-10 |s||y|. Every accepted
// iterate is feasible with a nonincreasing objective value.
MinimizeResult minimize(const ObjectiveFn& f, const GradientFn& g, std::vector<double> x0,
                        const BoxBounds& b, const OptimizerSettings& settings = {},
                        const IterationCallback& callback = nullptr);

// Stepwise warm-start construction of an initial control trajectory: for each
// step, minimize the single-step misfit plus proximal penalties anchored at
// the previous solution, then chain the result forward. With a horizon node
// every `kappa_multiple` time nodes, intermediate nodes are interpolated.
struct HorizonSettings {
    int kappa_multiple = 1; // horizon step = multiple * trajectory step
    double tol = 1e-3;      // projected-gradient tolerance per step
    OptimizerSettings inner;

    void validate() const;
};

obj::ControlTrajectory init_horizon(const obj::TrackingObjective& objective,
                                    const HorizonSettings& settings = {});

} // namespace ks::opt
