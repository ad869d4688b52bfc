// Serial vs OpenMP timings for the main kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <random>

#include "sievesdp/cone.hpp"
#include "sievesdp/linalg.hpp"
#include "sievesdp/solver.hpp"
#include "sievesdp/sym_relax.hpp"

using namespace sievesdp;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_TensorRestrict(benchmark::State& state) {
  const auto p = interval_problem(400, {2, 3, 5, 7, 11});
  std::map<std::size_t, std::pair<double, double>> f{{0, {2, -1}}, {1, {3, -1}}, {3, {7, -1}}};
  for (auto _ : state) benchmark::DoNotOptimize(tensor_restrict<double>(p, f, exec_of(state)));
}

void BM_InBCone(benchmark::State& state) {
  const auto p = orthogonal_problem({5, 5, 3});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  MatrixF b = MatrixF::identity(p.size());
  for (auto& v : b.packed()) v += u(rng);
  b.add_diagonal(1.0);
  ConeOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(in_B_cone(p, b, p.all(), o));
}

void BM_BFromW(benchmark::State& state) {
  std::vector<std::int64_t> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};
  const auto p = interval_problem(50, primes);
  WeightVector w(p.partition_count());
  long k = 0;
  for (auto& v : w.values()) v = ratio(++k % 7, 3);
  for (auto _ : state) benchmark::DoNotOptimize(b_from_w(p, w, {}, exec_of(state)));
}

void BM_SolverStep(benchmark::State& state) {
  const auto p = orthogonal_problem({3, 3});
  SolveOptions o;
  o.max_outer = 3;
  o.max_inner = 200;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, {p.all()}, {}, false, o));
}

}  // namespace

BENCHMARK(BM_TensorRestrict)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InBCone)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BFromW)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolverStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
