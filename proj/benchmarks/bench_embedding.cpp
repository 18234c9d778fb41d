#include <benchmark/benchmark.h>

#include <random>

#include "hphi/embedding.hpp"
#include "hphi/linalg.hpp"
#include "hphi/oracle.hpp"
#include "hphi/symplectic.hpp"

using namespace hphi;

namespace {

CMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  return m;
}

// Phi1 random, Phi2 = Phi1 + a positive definite real-form gap.
std::pair<weights::QuadraticWeight, weights::QuadraticWeight> strict_pair(int n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  const CMatrix a = random_matrix(n, rng);
  const CMatrix p = random_matrix(n, rng);
  const auto phi1 = weights::QuadraticWeight::make(a * a.adjoint() + CMatrix::Identity(n, n),
                                                   0.25 * (p + p.transpose()));
  std::normal_distribution<double> nd;
  RMatrix g(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j) g(i, j) = nd(rng);
  const RMatrix gap = 0.3 * g * g.transpose() + 0.2 * RMatrix::Identity(2 * n, 2 * n);
  return {phi1, weights::from_real_form(weights::real_form(phi1).q + gap)};
}

void BM_EigGeneral(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const CMatrix m = random_matrix(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::eig_general(m));
}
BENCHMARK(BM_EigGeneral)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_APhi(benchmark::State& state) {
  const auto phi = strict_pair(static_cast<int>(state.range(0))).first;
  for (auto _ : state) benchmark::DoNotOptimize(symplectic::a_phi(phi));
}
BENCHMARK(BM_APhi)->Arg(1)->Arg(3)->Arg(8);

void BM_EmbeddingNorm(benchmark::State& state) {
  const auto [p1, p2] = strict_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(embedding::embedding_norm(p1, p2));
}
BENCHMARK(BM_EmbeddingNorm)->Arg(1)->Arg(2)->Arg(3)->Arg(8);

void BM_OracleRatio(benchmark::State& state) {
  const auto [p1, p2] = strict_pair(static_cast<int>(state.range(0)));
  const CMatrix t = oracle::sample_integrable_t(p1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::ratio(t, p1, p2));
}
BENCHMARK(BM_OracleRatio)->Arg(1)->Arg(3)->Arg(8);

void BM_RandomSearch(benchmark::State& state) {
  const auto [p1, p2] = strict_pair(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::random_search_norm(p1, p2, static_cast<int>(state.range(0)), 0));
}
BENCHMARK(BM_RandomSearch)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Quadrature(benchmark::State& state) {
  const auto phi = weights::QuadraticWeight::standard(1);
  const auto f = metaplectic::GaussianPacket::centered(CMatrix::Constant(1, 1, Complex(0.2, 0.5)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::quadrature_check(f, phi, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Quadrature)->Arg(24)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
