#include <algorithm>
#include <cmath>

#include "wavectl/field.hpp"

namespace wavectl {

namespace kernels {

void fn_on_grid(const Fn& f, std::span<const double> xs,
                std::span<double> out) {
  long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = f(xs[i]);
}

void fn_on_grid_serial(const Fn& f, std::span<const double> xs,
                       std::span<double> out) {
  for (size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
}

void field_on_grid(const Field& u, std::span<const double> ts,
                   std::span<const double> xs, std::span<double> out) {
  long nt = static_cast<long>(ts.size());
  long nx = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nt; ++i)
    for (long j = 0; j < nx; ++j) out[i * nx + j] = u.value(ts[i], xs[j]);
}

void field_on_grid_serial(const Field& u, std::span<const double> ts,
                          std::span<const double> xs, std::span<double> out) {
  long nx = static_cast<long>(xs.size());
  for (size_t i = 0; i < ts.size(); ++i)
    for (long j = 0; j < nx; ++j)
      out[static_cast<long>(i) * nx + j] = u.value(ts[i], xs[j]);
}

}  // namespace kernels

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> xs(static_cast<size_t>(std::max(n, 1)));
  if (n == 1) {
    xs[0] = a;
    return xs;
  }
  for (int i = 0; i < n; ++i)
    xs[static_cast<size_t>(i)] =
        a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return xs;
}

double max_abs_diff(const Fn& f, const Fn& g, std::span<const double> xs) {
  double m = 0.0;
  long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static) reduction(max : m)
  for (long i = 0; i < n; ++i)
    m = std::max(m, std::fabs(f(xs[i]) - g(xs[i])));
  return m;
}

double max_abs(const Fn& f, std::span<const double> xs) {
  double m = 0.0;
  long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static) reduction(max : m)
  for (long i = 0; i < n; ++i) m = std::max(m, std::fabs(f(xs[i])));
  return m;
}

}  // namespace wavectl
