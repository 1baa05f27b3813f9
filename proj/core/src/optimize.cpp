#include "ks/optimize.hpp"

#include "ks/dense.hpp"
#include "ks/error.hpp"
#include "ks/log.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace ks::opt {

void BoxBounds::validate() const {
    if (lower.size() != upper.size()) throw ValidationError("box bounds: size mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] <= upper[i])) throw ValidationError("box bounds: lower > upper");
}

bool BoxBounds::contains(std::span<const double> x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    return true;
}

std::vector<double> project(std::span<const double> x, const BoxBounds& b) {
    if (x.size() != b.lower.size()) throw ValidationError("project: size mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::min(b.upper[i], std::max(x[i], b.lower[i]));
    return out;
}

void OptimizerSettings::validate() const {
    if (!(grad_tol > 0.0)) throw ValidationError("optimizer: grad_tol must be positive");
    if (max_iters < 0) throw ValidationError("optimizer: max_iters must be nonnegative");
    if (bfgs_memory < 0) throw ValidationError("optimizer: bfgs_memory must be nonnegative");
}

const char* to_string(OptStatus s) {
    switch (s) {
        case OptStatus::Converged: return "converged";
        case OptStatus::MaxIterations: return "max-iterations";
        case OptStatus::Stalled: return "stalled";
    }
    return "?";
}

namespace {

double nrm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot_v(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// a coordinate is active when it sits at a bound and the gradient pushes
// further outside
std::vector<char> active_set(std::span<const double> x, std::span<const double> g,
                             const BoxBounds& b) {
    std::vector<char> a(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double atol = 1e-12 * std::max(1.0, b.upper[i] - b.lower[i]);
        if ((x[i] <= b.lower[i] + atol && g[i] >= 0.0) ||
            (x[i] >= b.upper[i] - atol && g[i] <= 0.0))
            a[i] = 1;
    }
    return a;
}

// quasi-Newton model over the free coordinates; both variants treat active
// coordinates as frozen (zeroed in every stored vector)
class QuasiNewton {
public:
    QuasiNewton(int n, int memory) : n_(n), memory_(memory) { reset(1.0); }

    void reset(double gamma) {
        gamma_ = gamma > 0.0 && std::isfinite(gamma) ? gamma : 1.0;
        pairs_.clear();
        if (memory_ == 0) dense_ = scaled_identity(gamma_);
    }

    void update(std::vector<double> s, std::vector<double> y) {
        const double sy = dot_v(s, y);
        if (!(sy > 1e-10 * nrm2(s) * nrm2(y))) return; // reject weak curvature
        if (memory_ == 0) {
            dense_update(s, y, sy);
        } else {
            if (pairs_.empty()) {
                // rescale the seed matrix from the newest pair
                gamma_ = sy / dot_v(y, y);
            }
            pairs_.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (static_cast<int>(pairs_.size()) > memory_) pairs_.pop_front();
        }
    }

    // d = -(model) * g, with g already masked to the free coordinates
    std::vector<double> direction(std::span<const double> g) const {
        if (memory_ == 0) {
            std::vector<double> d(n_, 0.0);
            for (int i = 0; i < n_; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n_; ++j) acc += dense_(i, j) * g[j];
                d[i] = -acc;
            }
            return d;
        }
        // two-loop recursion
        std::vector<double> q(g.begin(), g.end());
        std::vector<double> alpha(pairs_.size());
        for (int k = static_cast<int>(pairs_.size()) - 1; k >= 0; --k) {
            const auto& p = pairs_[k];
            alpha[k] = p.rho * dot_v(p.s, q);
            for (int i = 0; i < n_; ++i) q[i] -= alpha[k] * p.y[i];
        }
        for (int i = 0; i < n_; ++i) q[i] *= gamma_;
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            const auto& p = pairs_[k];
            const double beta = p.rho * dot_v(p.y, q);
            for (int i = 0; i < n_; ++i) q[i] += (alpha[k] - beta) * p.s[i];
        }
        for (double& v : q) v = -v;
        return q;
    }

private:
    DenseMat scaled_identity(double gamma) const {
        DenseMat m(n_, n_);
        for (int i = 0; i < n_; ++i) m(i, i) = gamma;
        return m;
    }

    // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
    void dense_update(const std::vector<double>& s, const std::vector<double>& y, double sy) {
        const double rho = 1.0 / sy;
        std::vector<double> hy(n_, 0.0);
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) acc += dense_(i, j) * y[j];
            hy[i] = acc;
        }
        const double yhy = dot_v(y, hy);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                dense_(i, j) += -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                                rho * (1.0 + rho * yhy) * s[i] * s[j];
    }

    struct Pair {
        std::vector<double> s, y;
        double rho;
    };

    int n_;
    int memory_;
    double gamma_ = 1.0;
    DenseMat dense_;
    std::deque<Pair> pairs_;
};

} // namespace

MinimizeResult minimize(const ObjectiveFn& f, const GradientFn& g, std::vector<double> x0,
                        const BoxBounds& b, const OptimizerSettings& settings,
                        const IterationCallback& callback) {
    settings.validate();
    b.validate();
    const int n = static_cast<int>(x0.size());
    if (b.lower.size() != x0.size()) throw ValidationError("minimize: bounds size mismatch");

    std::vector<double> x = project(x0, b);
    double fx = f(x);
    if (!std::isfinite(fx)) throw SolverError("minimize: objective is not finite at the start");
    std::vector<double> grad(n), grad_new(n);
    g(x, grad);

    QuasiNewton qn(n, settings.bfgs_memory);
    std::vector<char> prev_active = active_set(x, grad, b);
    bool have_model = false; // at least one accepted curvature pair since reset
    double last_step = 0.0;
    double last_gamma = 1.0;

    auto projected_gradient_norm = [&](std::span<const double> xx, std::span<const double> gg) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double pi = std::min(b.upper[i], std::max(xx[i] - gg[i], b.lower[i]));
            const double d = xx[i] - pi;
            s += d * d;
        }
        return std::sqrt(s);
    };

    int iter = 0;
    for (;; ++iter) {
        const double pg = projected_gradient_norm(x, grad);
        if (callback) callback({iter, fx, pg, last_step});
        if (pg <= settings.grad_tol)
            return {std::move(x), fx, iter, OptStatus::Converged, pg};
        if (iter >= settings.max_iters)
            return {std::move(x), fx, iter, OptStatus::MaxIterations, pg};

        const std::vector<char> active = active_set(x, grad, b);
        if (active != prev_active && have_model) {
            qn.reset(last_gamma);
            have_model = false;
        }
        prev_active = active;

        std::vector<double> masked(grad);
        for (int i = 0; i < n; ++i)
            if (active[i]) masked[i] = 0.0;

        bool accepted = false;
        std::vector<double> xt, s;
        double ft = fx, step = 0.0;

        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            std::vector<double> d;
            if (attempt == 0) {
                d = qn.direction(masked);
                // fall back to steepest descent if the model lost definiteness
                if (dot_v(masked, d) >= 0.0 && nrm2(masked) > 0.0) {
                    for (int i = 0; i < n; ++i) d[i] = -masked[i];
                }
            } else {
                qn.reset(1.0);
                have_model = false;
                d.assign(n, 0.0);
                for (int i = 0; i < n; ++i) d[i] = -masked[i];
            }
            for (int i = 0; i < n; ++i)
                if (active[i]) d[i] = -grad[i];

            double t = 1.0;
            for (int bt = 0; bt <= settings.armijo.max_backtracks; ++bt) {
                xt.resize(n);
                for (int i = 0; i < n; ++i)
                    xt[i] = std::min(b.upper[i], std::max(x[i] + t * d[i], b.lower[i]));
                s.resize(n);
                double move = 0.0;
                for (int i = 0; i < n; ++i) {
                    s[i] = xt[i] - x[i];
                    move += s[i] * s[i];
                }
                if (move == 0.0) break; // projection pinned the whole step
                ft = f(xt);
                if (!std::isfinite(ft))
                    throw SolverError("minimize: objective returned a non-finite value");
                const double pred = settings.armijo.c1 * dot_v(grad, s);
                if (pred <= 0.0 && ft - fx <= pred) {
                    accepted = true;
                    step = t;
                    break;
                }
                t *= settings.armijo.backtrack;
            }
        }

        if (!accepted) {
            const double pg_now = projected_gradient_norm(x, grad);
            log_warn("minimize: line search stalled at iteration ", iter, ", |pg| = ", pg_now);
            return {std::move(x), fx, iter, OptStatus::Stalled, pg_now};
        }

        g(xt, grad_new);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = grad_new[i] - grad[i];

        // curvature restricted to the free coordinates
        std::vector<double> sm(s), ym(y);
        for (int i = 0; i < n; ++i)
            if (active[i]) sm[i] = ym[i] = 0.0;
        const double sy = dot_v(sm, ym), yy = dot_v(ym, ym);
        if (sy > 0.0 && yy > 0.0) {
            last_gamma = sy / yy;
            if (!have_model) {
                qn.reset(last_gamma);
                have_model = true;
            }
            qn.update(std::move(sm), std::move(ym));
        }

        x = std::move(xt);
        fx = ft;
        grad.swap(grad_new);
        last_step = step;
    }
}

void HorizonSettings::validate() const {
    if (kappa_multiple < 1) throw ValidationError("init horizon: kappa multiple must be >= 1");
    if (!(tol > 0.0)) throw ValidationError("init horizon: tol must be positive");
    inner.validate();
}

obj::ControlTrajectory init_horizon(const obj::TrackingObjective& objective,
                                    const HorizonSettings& settings) {
    settings.validate();
    const int N = objective.n_steps();
    const int k = settings.kappa_multiple;
    if (N % k != 0)
        throw ValidationError("init horizon: step count must be a multiple of the horizon step");
    const double kappa = k * objective.tau();

    BoxBounds bounds{objective.dipoles().lower_bounds(), objective.dipoles().upper_bounds()};
    OptimizerSettings inner = settings.inner;
    inner.grad_tol = settings.tol;

    obj::ControlTrajectory traj = objective.constant_trajectory();
    std::vector<double> anchor = objective.dipoles().initial_controls();
    std::vector<double> warm = anchor;

    for (int m = 1; m <= N / k; ++m) {
        const int n = m * k;
        auto fn = [&](std::span<const double> c) {
            return objective.step_eval(n, c, anchor, kappa);
        };
        auto gr = [&](std::span<const double> c, std::span<double> out) {
            objective.step_gradient(n, c, anchor, kappa, out);
        };
        MinimizeResult res;
        try {
            res = minimize(fn, gr, warm, bounds, inner);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "init horizon: step " << n << ": " << e.what();
            throw SolverError(os.str());
        }
        if (res.status != OptStatus::Converged)
            log_warn("init horizon: step ", n, " ended ", to_string(res.status), ", |pg| = ",
                     res.pg_norm);

        // fill nodes since the previous horizon node by linear interpolation
        const int n_prev = (m - 1) * k;
        for (int j = n_prev + 1; j <= n; ++j) {
            const double w = static_cast<double>(j - n_prev) / k;
            auto row = traj.node(j);
            for (int i = 0; i < traj.dim; ++i)
                row[i] = (1.0 - w) * anchor[i] + w * res.x[i];
        }
        anchor = res.x;
        warm = std::move(res.x);
    }
    return traj;
}

} // namespace ks::opt
