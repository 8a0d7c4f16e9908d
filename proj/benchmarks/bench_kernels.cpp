// Timing comparison of the OpenMP kernels against their serial reference
// twins.  Every pair must produce bit-identical output (each element is
// computed independently in both versions), so besides the timings this
// reports an identity check and exits with the number of mismatching pairs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/periodic.hpp"
#include "wavectl/verify.hpp"

namespace {

using namespace wavectl;

double best_of(int repeats, const std::function<void()>& work) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    work();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool identical, int& mismatches) {
  std::printf("%-18s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "bit-identical" : "MISMATCH");
  if (!identical) ++mismatches;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  const int repeats = 3;
  int mismatches = 0;

  {  // pointwise profile evaluation
    const Fn f =
        Fn::parse("exp(-x^2/3)*cos(7*x) + 0.3*sin(2*x)*exp(-(x - 1)^2/2)");
    const std::vector<double> xs = linspace(-20.0, 20.0, 2'000'000);
    std::vector<double> par(xs.size()), ser(xs.size());
    const double tp = best_of(repeats, [&] { kernels::fn_on_grid(f, xs, par); });
    const double ts =
        best_of(repeats, [&] { kernels::fn_on_grid_serial(f, xs, ser); });
    report("fn_on_grid", ts, tp, same_bits(par, ser), mismatches);
  }

  PeriodicProblem pp;
  pp.initial =
      Fn::parse("sin(2*pi*x) + 0.25*cos(2*pi*x) + 0.1*sin(6*pi*x)").with_period(1.0);
  pp.target = Fn::parse("0.1*sin(2*pi*x) - 0.05*cos(6*pi*x)").with_period(1.0);
  pp.horizon = 0.25;
  pp.length = 1.0;
  const PeriodicSolution ps = solve_periodic(pp);

  {  // space-time field evaluation
    const std::vector<double> ts_grid = linspace(0.0, pp.horizon, 300);
    const std::vector<double> xs = linspace(0.0, pp.length, 1200);
    std::vector<double> par(ts_grid.size() * xs.size()), ser(par.size());
    const double tp = best_of(
        repeats, [&] { kernels::field_on_grid(*ps.field, ts_grid, xs, par); });
    const double ts = best_of(repeats, [&] {
      kernels::field_on_grid_serial(*ps.field, ts_grid, xs, ser);
    });
    report("field_on_grid", ts, tp, same_bits(par, ser), mismatches);
  }

  {  // trigonometric coefficient extraction
    const Fn f =
        Fn::parse("exp(0.8*cos(2*pi*x)) + 0.2*sin(4*pi*x)").with_period(1.0);
    CoeffTable par, ser;
    const double tp =
        best_of(repeats, [&] { par = fourier_analyze(f, 1.0, 1024); });
    const double ts =
        best_of(repeats, [&] { ser = fourier_analyze_serial(f, 1.0, 1024); });
    const bool identical =
        same_bits(par.cos_coef, ser.cos_coef) && same_bits(par.sin_coef, ser.sin_coef);
    report("fourier_analyze", ts, tp, identical, mismatches);
  }

  {  // leapfrog propagation
    const FDGrid grid = periodic_grid(pp.length, 1.0, 2000);
    FdOptions opt;
    opt.store_stride = 500;
    FdField par = fd_forward(pp.initial, ps.velocity, grid, opt);
    FdField ser = fd_forward_serial(pp.initial, ps.velocity, grid, opt);
    const double tp = best_of(
        repeats, [&] { par = fd_forward(pp.initial, ps.velocity, grid, opt); });
    const double ts = best_of(repeats, [&] {
      ser = fd_forward_serial(pp.initial, ps.velocity, grid, opt);
    });
    bool identical = par.slice_count() == ser.slice_count();
    for (int k = 0; identical && k < par.slice_count(); ++k) {
      identical = same_bits(par.slice(k), ser.slice(k));
    }
    report("fd_forward", ts, tp, identical, mismatches);
  }

  return mismatches;
}
