#include <benchmark/benchmark.h>

#include <random>

#include "discrepancy/beck_fiala.hpp"
#include "discrepancy/lp_core.hpp"
#include "discrepancy/partial_coloring.hpp"
#include "discrepancy/phased_solver.hpp"
#include "discrepancy/reduction.hpp"
#include "discrepancy/set_system.hpp"

namespace {

using namespace discrepancy;

void BM_BeckFiala(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SetSystem sys = generate_random(n, n, 9, 1);
  for (auto _ : state) benchmark::DoNotOptimize(beck_fiala_color(sys));
}
BENCHMARK(BM_BeckFiala)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PartialColor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SetSystem sys = generate_random(n, n / 4, 4, 2);
  PartialColoringRequest req;
  req.rows = sys.incidence();
  req.budgets.assign(n / 4, 8.0);
  req.start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  req.step_size = PhaseConfig{}.step_size;
  Seed seed = 0;
  for (auto _ : state) {
    req.seed = seed++;
    benchmark::DoNotOptimize(partial_color(req));
  }
}
BENCHMARK(BM_PartialColor)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PhasedSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = static_cast<std::size_t>(state.range(1));
  const SetSystem sys = generate_random(n, n, t, 3);
  PhaseConfig cfg;
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(solve(sys, cfg));
  }
}
BENCHMARK(BM_PhasedSolve)
    ->Args({64, 4})
    ->Args({128, 9})
    ->Args({128, 25})
    ->Unit(benchmark::kMillisecond);

void BM_SimplexFeasibility(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  const Eigen::Index k = 8 * m;
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SetSystem head =
      generate_random(static_cast<std::size_t>(k), static_cast<std::size_t>(m), 3, 5);
  const Eigen::MatrixXd a = head.incidence();
  Eigen::VectorXd x(k);
  for (Eigen::Index i = 0; i < k; ++i) x(i) = u(gen);
  const auto sys = BoxedLinearSystem::unit_box(a, a * x);
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasible(sys));
}
BENCHMARK(BM_SimplexFeasibility)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ContainmentExact(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const SetSystem head = generate_random(default_head_size(m), m, 2, 6);
  const Eigen::MatrixXd a = head.incidence();
  for (auto _ : state) benchmark::DoNotOptimize(containment_check_exact(a, 2));
}
BENCHMARK(BM_ContainmentExact)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
