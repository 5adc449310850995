#include <random>

#include <benchmark/benchmark.h>

#include "kzb/connection.hpp"
#include "kzb/hodge.hpp"
#include "kzb/lie.hpp"
#include "kzb/monodromy.hpp"
#include "kzb/special.hpp"

using namespace kzb;

namespace {

Series random_element(const LieContext& lie, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Series s = lie.zero();
  for (int g = 0; g < static_cast<int>(lie.alphabet().size()); ++g) s += lie.gen(g) * cplx(u(rng), u(rng));
  return s;
}

// args: level, degree
void BM_SeriesMultiply(benchmark::State& st) {
  const LieContext lie(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), Subgroup::Full);
  std::mt19937_64 rng(7);
  const Series a = exp_series(random_element(lie, rng)), b = exp_series(random_element(lie, rng));
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_SeriesMultiply)->Args({1, 6})->Args({2, 4})->Args({2, 5})->Unit(benchmark::kMicrosecond);

void BM_Bch(benchmark::State& st) {
  const LieContext lie(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), Subgroup::Full);
  std::mt19937_64 rng(11);
  const Series a = random_element(lie, rng), b = random_element(lie, rng);
  for (auto _ : st) benchmark::DoNotOptimize(bch(a, b));
}
BENCHMARK(BM_Bch)->Args({1, 6})->Args({2, 4})->Unit(benchmark::kMicrosecond);

void BM_Omega(benchmark::State& st) {
  const KZBConnection conn({static_cast<int>(st.range(0)), Subgroup::Full, static_cast<int>(st.range(1)), 0, 1e-7});
  const cplx tau(0.1, 1.1), z(0.23, 0.31);
  for (auto _ : st) benchmark::DoNotOptimize(conn.omega(tau, z));
}
BENCHMARK(BM_Omega)->Args({1, 5})->Args({2, 5})->Args({3, 5})->Unit(benchmark::kMicrosecond);

void BM_Curvature(benchmark::State& st) {
  const KZBConnection conn({static_cast<int>(st.range(0)), Subgroup::Full, 5, 0, 1e-7});
  const cplx tau(0.1, 1.1), z(0.23, 0.31);
  for (auto _ : st) benchmark::DoNotOptimize(conn.curvature(tau, z));
}
BENCHMARK(BM_Curvature)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_LatticeSum(benchmark::State& st) {
  const TorsionPoint a(1, 0, 3);
  for (auto _ : st) benchmark::DoNotOptimize(eisenstein_lattice(4, a, cplx(0.0, 1.0), static_cast<int>(st.range(0))));
}
BENCHMARK(BM_LatticeSum)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_FiberTransport(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const KZBConnection conn({N, Subgroup::Full, static_cast<int>(st.range(1)), 0, 1e-7});
  const cplx tau(0.1, 1.1);
  const FiberPath loop = b_loop(N, tau, default_base_point(N, tau));
  for (auto _ : st) benchmark::DoNotOptimize(fiber_monodromy(conn, loop));
}
BENCHMARK(BM_FiberTransport)->Args({1, 4})->Args({2, 3})->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Sl2Ranks(benchmark::State& st) {
  const LieContext lie(static_cast<int>(st.range(0)), 6, Subgroup::Full);
  const Derivation L = residue_cusp(lie, Mat2{});
  for (auto _ : st) benchmark::DoNotOptimize(sl2_iso_check(lie, L, 6, 6));
}
BENCHMARK(BM_Sl2Ranks)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
