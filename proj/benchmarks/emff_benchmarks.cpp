#include <benchmark/benchmark.h>

#include "emff/amff.hpp"
#include "emff/em_model.hpp"
#include "emff/estimator.hpp"
#include "emff/sim_engine.hpp"
#include "emff/testbed1d.hpp"
#include "emff/verify.hpp"

namespace {

void bm_force_shape(benchmark::State& state) {
    const emff::Vec3 r{0.45, 0.1, -0.05};
    const emff::Vec3 ui{120.0, -30.0, 15.0};
    const emff::Vec3 uj{-80.0, 40.0, 5.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(emff::force_shape(r, ui, uj));
    }
}
BENCHMARK(bm_force_shape);

void bm_allocate_pair(benchmark::State& state) {
    const emff::Vec3 r{0.45, 0.1, -0.05};
    const emff::Vec3 f_star{-2.5e-3, 1.0e-3, 0.5e-3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(emff::allocate_pair(r, f_star));
    }
}
BENCHMARK(bm_allocate_pair);

void bm_peak_window_current(benchmark::State& state) {
    const std::vector<std::pair<double, double>> amp_omega{
        {1.3, 62.83185307179586}, {-0.8, 125.66370614359172}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(emff::peak_window_current(amp_omega, 0.1));
    }
}
BENCHMARK(bm_peak_window_current);

void bm_solve_dare(benchmark::State& state) {
    const emff::KalmanConfig cfg{0.1, 1.2e-6, 2.8756e-7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(emff::solve_dare(cfg));
    }
}
BENCHMARK(bm_solve_dare);

void bm_two_sat_second(benchmark::State& state) {
    emff::Scenario s = emff::reference_two_sat_scenario();
    s.duration = 1.0;
    s.control_on = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(emff::run_scenario(s));
    }
}
BENCHMARK(bm_two_sat_second)->Unit(benchmark::kMillisecond);

void bm_three_sat_second(benchmark::State& state) {
    emff::Scenario s = emff::reference_three_sat_scenario();
    s.duration = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(emff::run_scenario(s));
    }
}
BENCHMARK(bm_three_sat_second)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
