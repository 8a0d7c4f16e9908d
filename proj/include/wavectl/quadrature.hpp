#pragma once

#include <vector>

#include "wavectl/fn.hpp"

namespace wavectl {

// Composite Simpson integration. Panels are allocated per unit length (even
// count, floor of min_panels), and the interval is split at the integrand's
// reported breakpoints so each smooth piece is integrated on its own.
struct Quadrature {
  int panels_per_unit = 2048;
  int min_panels = 8;

  double integrate(const Fn& f, double a, double b) const;
};

// Composite Simpson for a raw callable, n panels (n rounded up to even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  if (a == b) return 0.0;
  if (n < 2) n = 2;
  if (n % 2) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i)
    s += f(a + h * i) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Cumulative integral of a function over [lo, hi]: a table of per-cell
// Simpson integrals with cells aligned to the function's breakpoints, plus a
// partial-cell Simpson correction at evaluation time. Queries outside the
// table fall back to direct quadrature from the nearest edge. Immutable after
// construction.
class Antiderivative {
 public:
  Antiderivative(Fn f, double lo, double hi, int cells_per_unit,
                 Quadrature fallback = {});

  // integral of f over [a, b]
  double between(double a, double b) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double cumulative_at(double x) const;

  Fn f_;
  double lo_, hi_;
  std::vector<double> knots_;  // cell edges, knots_.front()==lo, back()==hi
  std::vector<double> cum_;    // cum_[j] = integral over [lo, knots_[j]]
  Quadrature fallback_;
};

}  // namespace wavectl
