// Timing comparison of the OpenMP kernels against their serial reference:
// row elimination over F_p and the per-point convolution loop.

#include <chrono>
#include <cstdio>

#include "pmconv/convolve.hpp"
#include "pmconv/randgen.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace pmconv;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void bench_elimination(Rng& rng, size_t n, uint32_t p) {
  exact::Matrix m(p, n, n + 32);
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      m.set(i, j, static_cast<uint32_t>(rng.uniform(0, p - 1)));
  std::vector<size_t> piv_s, piv_p;
  exact::Matrix a = m;
  Clock::time_point t0 = Clock::now();
  exact::detail::eliminate_serial(a, piv_s);
  double serial = ms_since(t0);
  exact::Matrix b = m;
  t0 = Clock::now();
  exact::detail::eliminate_parallel(b, piv_p);
  double parallel = ms_since(t0);
  bool same = a == b && piv_s == piv_p;
  std::printf("eliminate %4zux%-4zu F_%-3u  serial %8.2f ms  parallel %8.2f ms  agree %s\n", n,
              n + 32, p, serial, parallel, same ? "yes" : "NO");
}

void bench_oracle(Rng& rng, size_t bars, uint32_t p) {
  auto base = std::make_shared<Base>(GridPoset({-2}, {22}));
  GridPoset w({-2}, {22});
  auto m = realize_barcode(random_barcode(rng, bars, 0, 10), base, p);
  auto n = realize_barcode(random_barcode(rng, bars, 0, 10), base, p);
  Clock::time_point t0 = Clock::now();
  auto serial_out = sheaf_convolve_oracle(m, n, w, exact::Exec::Serial);
  double serial = ms_since(t0);
  t0 = Clock::now();
  auto parallel_out = sheaf_convolve_oracle(m, n, w, exact::Exec::Parallel);
  double parallel = ms_since(t0);
  bool same = serial_out == parallel_out;
  std::printf("sheaf oracle %2zu bars F_%-3u    serial %8.2f ms  parallel %8.2f ms  agree %s\n",
              bars, p, serial, parallel, same ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run the serial kernel\n");
#endif
  Rng rng(1);
  for (size_t n : {128, 256, 512}) bench_elimination(rng, n, 2);
  bench_elimination(rng, 256, 101);
  for (size_t bars : {2, 5, 8}) bench_oracle(rng, bars, 2);
  return 0;
}
