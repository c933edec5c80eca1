#include "rarc/fdapprox.hpp"
#include "rarc/problems.hpp"
#include "rarc/random.hpp"
#include "rarc/solver.hpp"
#include "rarc/subsolver.hpp"

#include <benchmark/benchmark.h>

using namespace rarc;

namespace {

Matrix seeded_symmetric(Index n, std::uint64_t seed) {
  CounterRng rng(seed, Stream::kInstance);
  const Matrix m = gaussian_matrix(n, n, rng);
  return 0.5 * (m + m.transpose());
}

void BM_SymEig(benchmark::State& state) {
  const Matrix a = seeded_symmetric(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(a));
}
BENCHMARK(BM_SymEig)->Arg(8)->Arg(32)->Arg(128);

void BM_SolveCubic(benchmark::State& state) {
  const Index n = state.range(0);
  CounterRng rng(2, Stream::kInstance);
  CubicModel m;
  m.g = gaussian_matrix(n, 1, rng);
  m.b = seeded_symmetric(n, 3);
  m.sigma_cub = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_cubic(m, 1.0));
}
BENCHMARK(BM_SolveCubic)->Arg(8)->Arg(32)->Arg(128);

void BM_FdPullbackHessian(benchmark::State& state) {
  const ProblemInstance pi = make_top_eigenvalue(state.range(0), 1);
  const Point p = random_point(pi.manifold, 1);
  const TangentBasis b = tangent_basis(p);
  const double f0 = pi.objective.value(p.coords);
  for (auto _ : state) benchmark::DoNotOptimize(fd_hessian_pullback(pi.objective, p, b, 1e-4, f0));
}
BENCHMARK(BM_FdPullbackHessian)->Arg(10)->Arg(20)->Arg(50);

void BM_RunTopEigenvalue(benchmark::State& state) {
  const ProblemInstance pi = make_top_eigenvalue(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(run(pi.objective, pi.manifold, SolverConfig{}));
}
BENCHMARK(BM_RunTopEigenvalue)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_RunTruncatedSvd(benchmark::State& state) {
  const ProblemInstance pi = make_truncated_svd(8, 6, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run(pi.objective, pi.manifold, SolverConfig{}));
}
BENCHMARK(BM_RunTruncatedSvd)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
