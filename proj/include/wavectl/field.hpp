#pragma once

#include <memory>
#include <span>
#include <vector>

#include "wavectl/fn.hpp"

namespace wavectl {

// Space-time evaluator with partial derivatives through second order.
// Implementations are immutable after construction and safe to call from
// parallel loops.
class Field {
 public:
  virtual ~Field() = default;
  virtual double value(double t, double x) const = 0;
  virtual double dt(double t, double x) const = 0;
  virtual double dx(double t, double x) const = 0;
  virtual double dtt(double t, double x) const = 0;
  virtual double dxx(double t, double x) const = 0;
  virtual double dtx(double t, double x) const = 0;
};

namespace kernels {

// Parallel kernels with serial twins. The twins are the reference
// implementations the tests compare against (results must match bit for bit:
// every output element is computed independently in both versions).

void fn_on_grid(const Fn& f, std::span<const double> xs,
                std::span<double> out);
void fn_on_grid_serial(const Fn& f, std::span<const double> xs,
                       std::span<double> out);

// out is row-major: out[i*xs.size() + j] = u(ts[i], xs[j]).
void field_on_grid(const Field& u, std::span<const double> ts,
                   std::span<const double> xs, std::span<double> out);
void field_on_grid_serial(const Field& u, std::span<const double> ts,
                          std::span<const double> xs, std::span<double> out);

}  // namespace kernels

std::vector<double> linspace(double a, double b, int n);

// max_i |f(xs[i]) - g(xs[i])|
double max_abs_diff(const Fn& f, const Fn& g, std::span<const double> xs);
// max_i |f(xs[i])|
double max_abs(const Fn& f, std::span<const double> xs);

}  // namespace wavectl
