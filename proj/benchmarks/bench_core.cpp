#include <benchmark/benchmark.h>

#include "cohspec/eigen.hpp"
#include "cohspec/neumann.hpp"
#include "cohspec/noise.hpp"
#include "cohspec/oracle.hpp"
#include "cohspec/signal.hpp"

using namespace cohspec;

namespace {

DenseMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  RandomSource src(seed, 0);
  DenseMatrix m(n, n);
  for (double& v : m.data) v = src.gaussian();
  return m;
}

void BM_matvec(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const DenseMatrix a = random_matrix(n, 1);
  DenseVector x(n, 1.0), y(n);
  for (auto _ : state) {
    matvec_into(a, x.data.data(), y.data.data());
    benchmark::DoNotOptimize(y.data.data());
  }
  state.SetBytesProcessed(state.iterations() * int64_t(n) * int64_t(n) * 8);
}
BENCHMARK(BM_matvec)->Arg(256)->Arg(1024)->Arg(4096);

void BM_leading_eigenpair(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  RandomSource src(7, 0);
  const DenseVector u = src.sphere(n);
  auto inst = make_rank_one(4.0 * std::sqrt(double(n)), u);
  DenseMatrix m = inst.m_star;
  const DenseMatrix h = random_matrix(n, 2);
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] += h.data[i];
  for (auto _ : state) {
    auto pair = leading_eigenpair(m, 1e-9, 2000, RandomSource(11, 0));
    benchmark::DoNotOptimize(pair.value);
  }
}
BENCHMARK(BM_leading_eigenpair)->Arg(256)->Arg(1024);

void BM_full_spectrum(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  const DenseMatrix a = random_matrix(n, 3);
  for (auto _ : state) {
    auto est = full_spectrum(a, 1e-10);
    benchmark::DoNotOptimize(est.eigenvalues.data());
  }
}
BENCHMARK(BM_full_spectrum)->Arg(16)->Arg(64)->Arg(128);

void BM_band_decompose(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  RandomSource src(5, 0);
  const DenseVector x = src.sphere(n);
  for (auto _ : state) {
    auto dec = band_decompose(x);
    benchmark::DoNotOptimize(dec.bands.data());
  }
}
BENCHMARK(BM_band_decompose)->Arg(1000)->Arg(100000);

void BM_oracle_symmetric_enumeration(benchmark::State& state) {
  const auto dist = DiscreteDist::rademacher();
  const DenseVector x = DenseVector::basis(3, 0);
  DenseVector flat(3, 1.0 / std::sqrt(3.0));
  for (auto _ : state) {
    const double v = oracle::exact_symmetric_moment(x, flat, 4, dist, 3);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_oracle_symmetric_enumeration);

}  // namespace

BENCHMARK_MAIN();
