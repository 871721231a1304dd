#include "mma/candidates.hpp"
#include "mma/risk.hpp"
#include "mma/seqmodel.hpp"
#include "mma/sim.hpp"
#include "mma/weights.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

mma::RegressionData gaussian(std::size_t n, std::size_t p) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  mma::RegressionData d;
  d.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < d.X.size(); ++i) d.X.data()[i] = z(rng);
  d.y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.y.size(); ++i) d.y[i] = z(rng);
  return d;
}

void BM_Orthogonalize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = gaussian(n, 2 * n / 3);
  for (auto _ : state) benchmark::DoNotOptimize(mma::orthogonalize(d));
}
BENCHMARK(BM_Orthogonalize)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SolveNested(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto view = mma::orthogonalize(gaussian(n, 2 * n / 3));
  const auto set = mma::all_nested(view.p());
  for (auto _ : state) benchmark::DoNotOptimize(mma::solve_nested(view, set, 1.0));
}
BENCHMARK(BM_SolveNested)->Arg(100)->Arg(1000);

void BM_SolveDiscrete(benchmark::State& state) {
  const auto view = mma::orthogonalize(gaussian(1000, 666));
  const auto set = mma::all_nested(view.p());
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mma::solve_discrete(view, set, 1.0, {N}));
}
BENCHMARK(BM_SolveDiscrete)->Arg(2)->Arg(5)->Arg(20);

void BM_SolveQp(benchmark::State& state) {
  const auto view = mma::orthogonalize(gaussian(300, 200));
  const auto set = mma::successive(static_cast<std::size_t>(state.range(0)), view.p());
  for (auto _ : state) benchmark::DoNotOptimize(mma::solve_qp(view, set, 1.0));
}
BENCHMARK(BM_SolveQp)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OracleDiscreteLarge(benchmark::State& state) {
  const auto pr = mma::poly_profile(1.0, 100000, 100000);
  const auto set = mma::all_nested(100000);
  for (auto _ : state) benchmark::DoNotOptimize(mma::oracle_discrete(pr, set, 2));
}
BENCHMARK(BM_OracleDiscreteLarge)->Unit(benchmark::kMillisecond);

void BM_Replication(benchmark::State& state) {
  mma::ScenarioConfig cfg;
  cfg.n = static_cast<std::size_t>(state.range(0));
  cfg.reps = 1000;
  const auto plan = mma::make_plan(cfg);
  std::size_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mma::run_method(mma::MethodId::M_ALL, plan, rep++ % cfg.reps));
}
BENCHMARK(BM_Replication)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
