// Serial reference vs OpenMP kernels on grid-sized arrays.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rwlab/kernels.hpp"

namespace k = rwlab::kernels;

namespace {

struct Arrays {
  std::vector<double> prev, curr, q, f, r, next;
  explicit Arrays(std::size_t n) : prev(n), curr(n), q(n), f(n), r(n), next(n) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -50.0 + 100.0 * static_cast<double>(i) / static_cast<double>(n);
      curr[i] = std::exp(-0.1 * x * x);
      prev[i] = 0.99 * curr[i];
      q[i] = 0.1 / (1.0 + x * x);
      r[i] = 3.0 + std::abs(x);
      f[i] = 1.0 - 2.0 / r[i];
    }
  }
};

template <void (*Fn)(const k::LeapfrogArgs&, std::span<double>)>
void BM_leapfrog(benchmark::State& st) {
  Arrays a(static_cast<std::size_t>(st.range(0)));
  const k::LeapfrogArgs args{a.prev, a.curr, a.q, {}, 0.09, 0.1};
  for (auto _ : st) {
    Fn(args, a.next);
    benchmark::DoNotOptimize(a.next.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <void (*Fn)(std::span<const double>, std::span<const double>, std::span<const double>,
                     double, double, std::span<double>)>
void BM_nonlinear(benchmark::State& st) {
  Arrays a(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    Fn(a.curr, a.f, a.r, 1.0, 3.0, a.next);
    benchmark::DoNotOptimize(a.next.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <double (*Fn)(std::span<const double>, double)>
void BM_trapezoid(benchmark::State& st) {
  Arrays a(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(a.curr, 0.1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <double (*Fn)(std::span<const double>)>
void BM_max_abs(benchmark::State& st) {
  Arrays a(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(a.curr));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

#define SIZES RangeMultiplier(8)->Range(1 << 10, 1 << 22)
BENCHMARK(BM_leapfrog<k::serial::leapfrog>)->SIZES;
BENCHMARK(BM_leapfrog<k::omp::leapfrog>)->SIZES;
BENCHMARK(BM_nonlinear<k::serial::nonlinear_source>)->SIZES;
BENCHMARK(BM_nonlinear<k::omp::nonlinear_source>)->SIZES;
BENCHMARK(BM_trapezoid<k::serial::trapezoid>)->SIZES;
BENCHMARK(BM_trapezoid<k::omp::trapezoid>)->SIZES;
BENCHMARK(BM_max_abs<k::serial::max_abs>)->SIZES;
BENCHMARK(BM_max_abs<k::omp::max_abs>)->SIZES;

BENCHMARK_MAIN();
