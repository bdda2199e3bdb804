#include "lognabla/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace lognabla;

namespace {

void rational_scan(benchmark::State& st, bool omp) {
  const auto hi = st.range(0);
  for (auto _ : st) {
    auto v = omp ? rational_scan_omp(5, 1, 2, 1, hi) : rational_scan_serial(5, 1, 2, 1, hi);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * hi);
}

void stream_scan(benchmark::State& st, bool omp) {
  const auto hi = st.range(0);
  const DigitStream a = DigitStream::from_positions(2, {1, 2, 4, 16, 65536}, std::int64_t{1} << 20);
  for (auto _ : st) {
    auto v = omp ? stream_scan_omp(a, 1, hi) : stream_scan_serial(a, 1, hi);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * hi);
}

void falling_min(benchmark::State& st, bool omp) {
  const int n_max = static_cast<int>(st.range(0));
  const std::int64_t k = n_max + 2 * 125;
  for (auto _ : st) {
    auto v = omp ? falling_min_omp(5, 1, 2, n_max, k) : falling_min_serial(5, 1, 2, n_max, k);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(rational_scan, serial, false)->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK_CAPTURE(rational_scan, omp, true)->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK_CAPTURE(stream_scan, serial, false)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK_CAPTURE(stream_scan, omp, true)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK_CAPTURE(falling_min, serial, false)->Arg(50)->Arg(200);
BENCHMARK_CAPTURE(falling_min, omp, true)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
