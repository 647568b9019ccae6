// Benchmark: OpenMP-parallel quadrature against the serial reference.
//
// The parallel path evaluates integrand nodes concurrently but accumulates in
// a fixed order, so its result must be bit-identical to the serial one; this
// tool asserts that while timing both on the heaviest real workload (the
// third-kind period, whose integrand evaluates ℘ on a shifted contour).
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "thp/curves.hpp"
#include "thp/periods.hpp"

using namespace thp;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const ShortModel E{BigRat(4), BigRat(-1)};  // y² = 4x³ − 4x + 1
  const CurvePoint Q(BigRat(0), BigRat(-1));

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled at build time; both paths run serially\n");
#endif
  std::printf("%8s %14s %14s %9s %10s\n", "digits", "serial (ms)", "parallel (ms)", "speedup",
              "identical");

  int mismatches = 0;
  const int digit_cases[] = {40, 80, 160, 250};
  for (int digits : digit_cases) {
    if (argc > 1 && digits > std::atoi(argv[1])) continue;
    const PeriodLattice L(E, digits);

    const auto t0 = Clock::now();
    const BigReal serial = third_kind_period(L, Q, /*parallel=*/false);
    const double t_serial = ms_since(t0);

    const auto t1 = Clock::now();
    const BigReal parallel = third_kind_period(L, Q, /*parallel=*/true);
    const double t_parallel = ms_since(t1);

    const bool identical = (serial - parallel).is_zero();
    if (!identical) ++mismatches;
    std::printf("%8d %14.1f %14.1f %8.2fx %10s\n", digits, t_serial, t_parallel,
                t_serial / t_parallel, identical ? "yes" : "NO");
  }

  if (mismatches != 0) {
    std::fprintf(stderr, "parallel and serial results disagree on %d case(s)\n", mismatches);
    return 1;
  }
  return 0;
}
