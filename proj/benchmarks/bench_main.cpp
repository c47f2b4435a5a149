#include <benchmark/benchmark.h>

#include <random>

#include "hyperfactor/diff_operator.hpp"
#include "hyperfactor/poly.hpp"
#include "hyperfactor/roots.hpp"

using namespace hyperfactor;

namespace {

Poly random_poly(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> c(d + 1);
  for (auto& x : c) x = Complex(u(g), u(g));
  return Poly(std::move(c));
}

void BM_Multiply(benchmark::State& st) {
  Poly a = random_poly(st.range(0), 1), b = random_poly(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_Multiply)->Arg(16)->Arg(64)->Arg(256);

void BM_Divide(benchmark::State& st) {
  Poly a = random_poly(2 * st.range(0), 3), b = random_poly(st.range(0), 4);
  for (auto _ : st) benchmark::DoNotOptimize(divide(a, b));
}
BENCHMARK(BM_Divide)->Arg(16)->Arg(64)->Arg(256);

void BM_Roots(benchmark::State& st) {
  Poly p = random_poly(st.range(0), 5);
  for (auto _ : st) benchmark::DoNotOptimize(roots(p));
}
BENCHMARK(BM_Roots)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ApplyN(benchmark::State& st) {
  DiffOperator T = DiffOperator::translation(Complex(1), Complex(1));
  Poly p = random_poly(64, 6);
  for (auto _ : st) benchmark::DoNotOptimize(apply_n(T, st.range(0), p));
}
BENCHMARK(BM_ApplyN)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DiskNorm(benchmark::State& st) {
  Poly p = random_poly(st.range(0), 7);
  for (auto _ : st) benchmark::DoNotOptimize(disk_norm(p, Real(2L)));
}
BENCHMARK(BM_DiskNorm)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
