#include "ks/field.hpp"

#include "ks/error.hpp"

namespace ks::mag {

namespace {

void check_distance(const Vec2& r) {
    if (norm2(r) < kMinSourceDistance * kMinSourceDistance)
        throw EvalError("field evaluation point coincides with a source");
}

// placement-resolved state of one source, with the placement tangents needed
// for control derivatives
struct Resolved {
    Vec2 pos;
    Vec2 dir;
    Vec2 dir_tangent;   // d(dir)/d(angle), direction mode
    Vec2 curve_tangent; // d(pos)/d(param), position mode
};

Resolved resolve(const DipoleConfig& config, int j, double placement) {
    const Dipole& d = config.dipoles[j];
    Resolved r;
    if (config.mode == ControlMode::IntensityDirection) {
        r.pos = d.position;
        r.dir = {std::cos(placement), std::sin(placement)};
        r.dir_tangent = {-std::sin(placement), std::cos(placement)};
    } else {
        r.pos = d.trajectory->position(placement);
        r.dir = d.direction();
        r.curve_tangent = d.trajectory->derivative(placement);
    }
    return r;
}

} // namespace

SourceKernel source_kernel(const Vec2& r) {
    check_distance(r);
    const double q = norm2(r);
    const double inv = 1.0 / q;
    const double inv2 = inv * inv;
    const double inv3 = inv2 * inv;

    SourceKernel k;
    const Mat2 rr = outer(r, r);
    k.M = 2.0 * inv2 * rr + (-inv) * identity2();

    const Vec2 e[2] = {{1.0, 0.0}, {0.0, 1.0}};
    const double rc[2] = {r.x, r.y};
    for (int a = 0; a < 2; ++a) {
        Mat2 d = 2.0 * inv2 * (outer(e[a], r) + outer(r, e[a]));
        d += (-8.0 * rc[a] * inv3) * rr;
        d += (2.0 * rc[a] * inv2) * identity2();
        k.dM[a] = d;
    }
    return k;
}

SourceKernelHessian source_kernel_hessian(const Vec2& r) {
    check_distance(r);
    const double q = norm2(r);
    const double inv = 1.0 / q;
    const double inv2 = inv * inv;
    const double inv3 = inv2 * inv;
    const double inv4 = inv2 * inv2;

    const Mat2 rr = outer(r, r);
    const Vec2 e[2] = {{1.0, 0.0}, {0.0, 1.0}};
    const double rc[2] = {r.x, r.y};

    SourceKernelHessian h;
    for (int a = 0; a < 2; ++a) {
        for (int b = a; b < 2; ++b) {
            const double delta = a == b ? 1.0 : 0.0;
            Mat2 d = 2.0 * inv2 * (outer(e[a], e[b]) + outer(e[b], e[a]));
            Mat2 mixed = rc[b] * (outer(e[a], r) + outer(r, e[a])) +
                         rc[a] * (outer(e[b], r) + outer(r, e[b]));
            mixed += delta * rr;
            mixed += (rc[a] * rc[b]) * identity2();
            d += (-8.0 * inv3) * mixed;
            d += (48.0 * rc[a] * rc[b] * inv4) * rr;
            d += (2.0 * delta * inv2) * identity2();
            h.d2M[a][b] = d;
            h.d2M[b][a] = d;
        }
    }
    return h;
}

FieldSample eval_field(std::span<const Dipole> states, const Vec2& x) {
    FieldSample s;
    for (const Dipole& d : states) {
        const SourceKernel k = source_kernel(x - d.position);
        const Vec2 dir = d.direction();
        s.h += d.intensity * k.M.apply(dir);
        const Vec2 g0 = d.intensity * k.dM[0].apply(dir);
        const Vec2 g1 = d.intensity * k.dM[1].apply(dir);
        s.grad_h.m00 += g0.x;
        s.grad_h.m10 += g0.y;
        s.grad_h.m01 += g1.x;
        s.grad_h.m11 += g1.y;
    }
    s.kelvin = 2.0 * s.grad_h.apply_t(s.h);
    return s;
}

FieldSample eval_field(const DipoleConfig& config, std::span<const double> controls,
                       const Vec2& x) {
    const auto states = config.states(controls);
    return eval_field(states, x);
}

std::array<DenseMat, 2> kelvin_coefficients(const DipoleConfig& config,
                                            std::span<const double> placements, const Vec2& x) {
    const int n = config.n_sources();
    std::array<DenseMat, 2> c = {DenseMat(n, n), DenseMat(n, n)};
    std::vector<Vec2> D(n);
    std::vector<Vec2> E[2] = {std::vector<Vec2>(n), std::vector<Vec2>(n)};
    for (int j = 0; j < n; ++j) {
        const Resolved r = resolve(config, j, placements[j]);
        const SourceKernel k = source_kernel(x - r.pos);
        D[j] = k.M.apply(r.dir);
        E[0][j] = k.dM[0].apply(r.dir);
        E[1][j] = k.dM[1].apply(r.dir);
    }
    for (int a = 0; a < 2; ++a)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                c[a](j, l) = dot(E[a][j], D[l]) + dot(D[j], E[a][l]);
    return c;
}

void force_with_control_grad(const DipoleConfig& config, std::span<const double> controls,
                             const Vec2& x, ForcePointEval& out) {
    const int n = config.n_sources();
    out.d_intensity.resize(n);
    out.d_placement.resize(n);

    // weighted sums h = Σ a_j D_j and dh_k = Σ a_j E_j^k, plus per-source
    // placement tangents P_j = ∂D_j/∂placement and PE_j^k = ∂E_j^k/∂placement
    Vec2 h, dh[2];
    struct PerSource {
        Vec2 D, E[2], P, PE[2];
    };
    thread_local std::vector<PerSource> cache;
    cache.resize(n);

    const bool direction_mode = config.mode == ControlMode::IntensityDirection;
    for (int j = 0; j < n; ++j) {
        const Resolved r = resolve(config, j, controls[n + j]);
        const Vec2 off = x - r.pos;
        const SourceKernel k = source_kernel(off);
        PerSource& ps = cache[j];
        ps.D = k.M.apply(r.dir);
        ps.E[0] = k.dM[0].apply(r.dir);
        ps.E[1] = k.dM[1].apply(r.dir);
        if (direction_mode) {
            ps.P = k.M.apply(r.dir_tangent);
            ps.PE[0] = k.dM[0].apply(r.dir_tangent);
            ps.PE[1] = k.dM[1].apply(r.dir_tangent);
        } else {
            // position enters through the offset, hence the sign flip
            const Vec2 t = r.curve_tangent;
            ps.P = -(t.x * ps.E[0] + t.y * ps.E[1]);
            const SourceKernelHessian hh = source_kernel_hessian(off);
            for (int a = 0; a < 2; ++a) {
                const Vec2 w0 = hh.d2M[a][0].apply(r.dir);
                const Vec2 w1 = hh.d2M[a][1].apply(r.dir);
                ps.PE[a] = -(t.x * w0 + t.y * w1);
            }
        }
        const double alpha = controls[j];
        h += alpha * ps.D;
        dh[0] += alpha * ps.E[0];
        dh[1] += alpha * ps.E[1];
    }

    out.kelvin = {2.0 * dot(h, dh[0]), 2.0 * dot(h, dh[1])};
    for (int j = 0; j < n; ++j) {
        const PerSource& ps = cache[j];
        const double alpha = controls[j];
        out.d_intensity[j] = {2.0 * (dot(ps.E[0], h) + dot(ps.D, dh[0])),
                              2.0 * (dot(ps.E[1], h) + dot(ps.D, dh[1]))};
        out.d_placement[j] = {2.0 * alpha * (dot(ps.PE[0], h) + dot(ps.P, dh[0])),
                              2.0 * alpha * (dot(ps.PE[1], h) + dot(ps.P, dh[1]))};
    }
}

} // namespace ks::mag
