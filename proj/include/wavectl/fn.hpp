#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wavectl {

// Implementation interface behind Fn. Derived classes must be immutable after
// construction so evaluation stays re-entrant (solver kernels call these from
// parallel loops).
class FnImpl {
 public:
  virtual ~FnImpl() = default;
  virtual double value(double x) const = 0;
  // order in 1..3.
  virtual double deriv(double x, int order) const = 0;
  // One-sided derivative for piecewise representations; everything smooth
  // falls through to deriv().
  virtual double deriv_side(double x, int order, bool from_left) const {
    (void)from_left;
    return deriv(x, order);
  }
  // Append interior points in [a,b] where the function is not C^3 (seams,
  // piece junctions). Quadrature splits panels there.
  virtual void breakpoints(double a, double b,
                           std::vector<double>& out) const {
    (void)a;
    (void)b;
    (void)out;
  }
};

// One-variable function handle: an immutable expression tree, a uniform
// sample table with cubic interpolation, or a composite built by the solvers.
// Copying is cheap (shared state).
class Fn {
 public:
  Fn() = default;
  explicit Fn(std::shared_ptr<const FnImpl> impl,
              std::optional<double> period = std::nullopt)
      : impl_(std::move(impl)), period_(period) {}

  explicit operator bool() const { return static_cast<bool>(impl_); }

  double operator()(double x) const { return impl_->value(x); }
  double deriv(double x, int order = 1) const;
  double deriv_side(double x, int order, bool from_left) const;

  std::optional<double> period() const { return period_; }
  Fn with_period(double length) const {
    Fn copy = *this;
    copy.period_ = length;
    return copy;
  }

  void breakpoints(double a, double b, std::vector<double>& out) const {
    impl_->breakpoints(a, b, out);
  }

  const std::shared_ptr<const FnImpl>& impl() const { return impl_; }

  // --- factories -----------------------------------------------------------

  // Expression over the variable `x` (see expr.hpp for the grammar).
  static Fn parse(std::string_view src);
  static Fn constant(double c);
  // Uniform samples starting at x0 with spacing dx (dx > 0, >= 4 points).
  // With a declared period L the table must cover exactly one period,
  // (n-1)*dx == L, and evaluation wraps; otherwise evaluation outside the
  // covered interval throws DomainError.
  static Fn samples(double x0, double dx, std::vector<double> values,
                    std::optional<double> period = std::nullopt);
  // Two-column CSV (x,value), strictly increasing uniform x. An optional
  // non-numeric header row is skipped.
  static Fn from_csv(const std::string& path,
                     std::optional<double> period = std::nullopt);
  // Polynomial sum c[i] * (x - center)^i.
  static Fn poly(double center, std::vector<double> coeffs);
  // Finite trigonometric sum: base + sum_k A[k-1] cos(2k pi x/L) +
  // B[k-1] sin(2k pi x/L). Declared period L.
  static Fn trig_series(double base, double length, std::vector<double> cos_amp,
                        std::vector<double> sin_amp);
  // Pieces[i] lives on [knots[i], knots[i+1]); evaluation outside
  // [knots.front(), knots.back()] throws DomainError.
  static Fn piecewise(std::vector<double> knots, std::vector<Fn> pieces);
  // Wrap an arbitrary callable; derivatives fall back to centered 5-point
  // stencils with the given step.
  static Fn from_callable(std::function<double(double)> f, double deriv_step);

 private:
  std::shared_ptr<const FnImpl> impl_;
  std::optional<double> period_;
};

// --- composites -------------------------------------------------------------

// c0 + sum_i w_i * f_i(x)
Fn lin_combo(double c0, std::vector<std::pair<double, Fn>> terms);
Fn operator+(const Fn& a, const Fn& b);
Fn operator-(const Fn& a, const Fn& b);
Fn operator*(double w, const Fn& f);
Fn operator+(const Fn& a, double c);
Fn operator-(const Fn& a, double c);

// x -> f(a*x + b)
Fn affine_arg(const Fn& f, double a, double b);
inline Fn shift_arg(const Fn& f, double s) { return affine_arg(f, 1.0, s); }

// x -> exp(f(x))
Fn exp_of(const Fn& f);

// Periodic odd/even reflection of a function given on [0, length]; the
// result has declared period 2*length.
Fn reflect_extend(const Fn& f, double length, bool odd);

}  // namespace wavectl
