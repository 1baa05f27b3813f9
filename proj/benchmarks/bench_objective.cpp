#include <benchmark/benchmark.h>

#include "ks/driver.hpp"
#include "ks/scenario.hpp"

namespace {

// desk-size variant of the bundled direction-control study
ks::app::Scenario small_scenario(int n_steps) {
    auto s = ks::app::load_scenario(SCENARIO_DIR "/example1-direction.json");
    s.n_steps = n_steps;
    s.quadrature_refinement = 3;
    return s;
}

void objective_eval(benchmark::State& state) {
    const auto s = small_scenario(static_cast<int>(state.range(0)));
    const auto objective = ks::app::build_objective(s, 1);
    const auto traj = objective.constant_trajectory();
    for (auto _ : state) {
        benchmark::DoNotOptimize(objective.eval(traj));
    }
}
BENCHMARK(objective_eval)->Arg(10)->Arg(50);

void objective_gradient(benchmark::State& state) {
    const auto s = small_scenario(static_cast<int>(state.range(0)));
    const auto objective = ks::app::build_objective(s, 1);
    const auto traj = objective.constant_trajectory();
    for (auto _ : state) {
        benchmark::DoNotOptimize(objective.gradient(traj));
    }
}
BENCHMARK(objective_gradient)->Arg(10)->Arg(50);

} // namespace
