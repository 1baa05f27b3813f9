#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "ks/field.hpp"

namespace {

ks::mag::DipoleConfig ring_config(int n) {
    ks::mag::DipoleConfig cfg;
    cfg.mode = ks::mag::ControlMode::IntensityDirection;
    for (int i = 0; i < n; ++i) {
        const double a = 2 * std::numbers::pi * i / n;
        ks::mag::Dipole d;
        d.position = {1.2 * std::cos(a), 1.2 * std::sin(a)};
        d.direction_angle = a;
        d.intensity = 1.0;
        cfg.dipoles.push_back(d);
    }
    cfg.bounds.intensity_lo.assign(n, -2.0);
    cfg.bounds.intensity_hi.assign(n, 2.0);
    cfg.bounds.placement_lo.assign(n, 0.0);
    cfg.bounds.placement_hi.assign(n, 2 * std::numbers::pi);
    return cfg;
}

void field_eval(benchmark::State& state) {
    const auto cfg = ring_config(static_cast<int>(state.range(0)));
    const auto states = cfg.states(cfg.initial_controls());
    double acc = 0.0;
    int k = 0;
    for (auto _ : state) {
        const ks::Vec2 x{0.3 * std::cos(k * 0.7), 0.3 * std::sin(k * 0.7)};
        ++k;
        acc += ks::mag::eval_field(states, x).kelvin.x;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(field_eval)->Arg(4)->Arg(16);

void force_control_gradient(benchmark::State& state) {
    const auto cfg = ring_config(static_cast<int>(state.range(0)));
    const auto controls = cfg.initial_controls();
    ks::mag::ForcePointEval eval;
    double acc = 0.0;
    int k = 0;
    for (auto _ : state) {
        const ks::Vec2 x{0.3 * std::cos(k * 0.7), 0.3 * std::sin(k * 0.7)};
        ++k;
        ks::mag::force_with_control_grad(cfg, controls, x, eval);
        acc += eval.kelvin.x;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(force_control_gradient)->Arg(4)->Arg(16);

} // namespace

BENCHMARK_MAIN();
