#include <benchmark/benchmark.h>

#include "sacd/admm.hpp"
#include "sacd/gradients.hpp"
#include "sacd/linalg.hpp"
#include "sacd/rea1.hpp"

namespace {

using namespace sacd;

void BM_SolveCareControl(benchmark::State& state) {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            solve_care_control(plant.a, cfg.b, plant.q_weight, plant.r_weight));
    }
}
BENCHMARK(BM_SolveCareControl);

void BM_SolveLyapunov(benchmark::State& state) {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    const RiccatiPair ric = solve_gains(plant, cfg);
    const Eigen::MatrixXd a_cl = plant.a + cfg.b * ric.k_opt;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_lyapunov(a_cl, plant.pi_w));
    }
}
BENCHMARK(BM_SolveLyapunov);

void BM_SolveGains(benchmark::State& state) {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_gains(plant, cfg));
    }
}
BENCHMARK(BM_SolveGains);

void BM_GradB(benchmark::State& state) {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    const RiccatiPair ric = solve_gains(plant, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grad_b(plant, cfg, ric));
    }
}
BENCHMARK(BM_GradB);

void BM_AlternateSpc(benchmark::State& state) {
    const PlantModel plant = rea1::plant();
    const Configuration cfg = rea1::initial_config();
    const ScenarioSpec scenario = rea1::scenario(ScenarioKind::kSparsity);
    const AdmmParams params = rea1::benchmark_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(alternate(plant, cfg, scenario, params));
    }
}
BENCHMARK(BM_AlternateSpc)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
