#include <benchmark/benchmark.h>

#include <random>

#include "hamoracle/kernels.hpp"
#include "hamoracle/linalg.hpp"

using namespace hamoracle;

namespace {

struct Fixture {
  CMatrix psi;
  CMatrix w;
  CMatrix factors;
  int dim_m;
  int dim_b;
};

Fixture make(int dim_a, int dim_m, int dim_b) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Fixture f;
  f.dim_m = dim_m;
  f.dim_b = dim_b;
  f.psi = CMatrix(dim_a, dim_m * dim_b);
  for (Eigen::Index i = 0; i < f.psi.size(); ++i) f.psi.data()[i] = cplx(g(rng), g(rng));
  f.factors = CMatrix(dim_a, dim_m);
  for (Eigen::Index i = 0; i < f.factors.size(); ++i) f.factors.data()[i] = std::polar(1.0, g(rng));
  f.w = random_unitary(dim_m * dim_b, rng);
  return f;
}

template <kernels::Backend B>
void bm_apply_right(benchmark::State& st) {
  Fixture f = make(static_cast<int>(st.range(0)), 6, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    kernels::apply_right(B, f.psi, f.w);
    benchmark::DoNotOptimize(f.psi.data());
  }
}

template <kernels::Backend B>
void bm_apply_phases(benchmark::State& st) {
  Fixture f = make(static_cast<int>(st.range(0)), 6, static_cast<int>(st.range(0)));
  for (auto _ : st) {
    kernels::apply_phases(B, f.psi, f.factors, f.dim_b);
    benchmark::DoNotOptimize(f.psi.data());
  }
}

template <kernels::Backend B>
void bm_gram(benchmark::State& st) {
  Fixture f = make(static_cast<int>(st.range(0)), 6, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::gram(B, f.psi));
}

template <kernels::Backend B>
void bm_trace_ancilla(benchmark::State& st) {
  Fixture f = make(static_cast<int>(st.range(0)), 6, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::trace_ancilla(B, f.psi, f.dim_m, f.dim_b));
}

}  // namespace

BENCHMARK(bm_apply_right<kernels::Backend::serial>)->Arg(8)->Arg(32)->Arg(64);
BENCHMARK(bm_apply_right<kernels::Backend::parallel>)->Arg(8)->Arg(32)->Arg(64);
BENCHMARK(bm_apply_phases<kernels::Backend::serial>)->Arg(32)->Arg(128);
BENCHMARK(bm_apply_phases<kernels::Backend::parallel>)->Arg(32)->Arg(128);
BENCHMARK(bm_gram<kernels::Backend::serial>)->Arg(32)->Arg(128);
BENCHMARK(bm_gram<kernels::Backend::parallel>)->Arg(32)->Arg(128);
BENCHMARK(bm_trace_ancilla<kernels::Backend::serial>)->Arg(32)->Arg(128);
BENCHMARK(bm_trace_ancilla<kernels::Backend::parallel>)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
