#include <benchmark/benchmark.h>

#include <random>

#include "qrl/capacity.hpp"
#include "qrl/fisher.hpp"

namespace {

qrl::Matrix random_hermitian4(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  qrl::Matrix a(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      a(i, j) = qrl::Complex(n(rng), n(rng));
    }
  }
  return a + a.adjoint();
}

void BM_Eigh4(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const qrl::Matrix m = random_hermitian4(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrl::eigh(m));
  }
}
BENCHMARK(BM_Eigh4);

void BM_H2Conditional(benchmark::State& state) {
  const qrl::BipartiteState rho =
      qrl::choi_bf(qrl::stinespring_isometry({1.2, 0.7, 0.3}, qrl::ProbeState{0.4, 1.9}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrl::h2_conditional(rho));
  }
}
BENCHMARK(BM_H2Conditional)->Unit(benchmark::kMillisecond);

// Tensor rule (as used in the probe search) and adaptive rule, at eta = 1e-4.
void BM_AvgTraceQfi(benchmark::State& state) {
  qrl::QuadratureSpec quad = state.range(0) == 0 ? qrl::QuadratureSpec::tensor() : qrl::QuadratureSpec{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrl::avg_trace_qfi({1.2, 0.7, 0.3}, qrl::ProbeState{0.4, 1.9}, quad, 1e-4));
  }
}
BENCHMARK(BM_AvgTraceQfi)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
