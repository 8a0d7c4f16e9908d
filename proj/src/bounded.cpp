#include "wavectl/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wavectl/errors.hpp"
#include "wavectl/quadrature.hpp"

namespace wavectl {

namespace {

constexpr double kCompatTol = 1e-6;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

void require_problem_shape(const BoundedProblem& p) {
  require_positive(p.horizon, "horizon");
  require_positive(p.length, "length");
  if (p.left_trace.has_value() != p.right_trace.has_value()) {
    throw InvariantError(
        "endpoint traces must be given for both ends or neither");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Jet (value, d1, ..., d_order) of fn at x, one-sided.
std::vector<double> jet_at(const Fn& fn, double x, int order, bool from_left) {
  std::vector<double> jet(static_cast<std::size_t>(order) + 1);
  jet[0] = fn(x);
  for (int j = 1; j <= order; ++j) {
    jet[static_cast<std::size_t>(j)] = fn.deriv_side(x, j, from_left);
  }
  return jet;
}

}  // namespace

bool CompatReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

double CompatReport::worst() const {
  double w = 0.0;
  for (const CheckResult& c : checks) w = std::max(w, c.value);
  return w;
}

CompatReport check_compat(const BoundedProblem& p) {
  require_problem_shape(p);
  const Fn& f = p.initial;
  const Fn& g = p.target;
  const double L = p.length;
  const double T = p.horizon;
  CompatReport rep;
  auto add = [&rep](const std::string& name, double value) {
    rep.checks.push_back(make_check(name, std::abs(value), kCompatTol));
  };

  if (p.homogeneous()) {
    if (p.kind == BoundaryKind::kDirichlet) {
      add("initial(0)", f(0.0));
      add("initial(L)", f(L));
      add("target(0)", g(0.0));
      add("target(L)", g(L));
      add("initial''(0)", f.deriv_side(0.0, 2, false));
      add("initial''(L)", f.deriv_side(L, 2, true));
      add("target''(0)", g.deriv_side(0.0, 2, false));
      add("target''(L)", g.deriv_side(L, 2, true));
    } else {
      add("initial'(0)", f.deriv_side(0.0, 1, false));
      add("initial'(L)", f.deriv_side(L, 1, true));
      add("target'(0)", g.deriv_side(0.0, 1, false));
      add("target'(L)", g.deriv_side(L, 1, true));
    }
    return rep;
  }

  const Fn& lt = *p.left_trace;
  const Fn& rt = *p.right_trace;
  if (p.kind == BoundaryKind::kDirichlet) {
    add("initial(0)-left(0)", f(0.0) - lt(0.0));
    add("initial''(0)-left''(0)", f.deriv_side(0.0, 2, false) -
                                      lt.deriv_side(0.0, 2, false));
    add("initial(L)-right(0)", f(L) - rt(0.0));
    add("initial''(L)-right''(0)",
        f.deriv_side(L, 2, true) - rt.deriv_side(0.0, 2, false));
    add("target(0)-left(T)", g(0.0) - lt(T));
    add("target''(0)-left''(T)",
        g.deriv_side(0.0, 2, false) - lt.deriv_side(T, 2, true));
    add("target(L)-right(T)", g(L) - rt(T));
    add("target''(L)-right''(T)",
        g.deriv_side(L, 2, true) - rt.deriv_side(T, 2, true));
  } else {
    add("initial'(0)-left(0)", f.deriv_side(0.0, 1, false) - lt(0.0));
    add("initial'(L)-right(0)", f.deriv_side(L, 1, true) - rt(0.0));
    add("target'(0)-left(T)", g.deriv_side(0.0, 1, false) - lt(T));
    add("target'(L)-right(T)", g.deriv_side(L, 1, true) - rt(T));
  }
  return rep;
}

Fn extend_odd(const Fn& fn, double length) {
  require_positive(length, "length");
  const double v0 = std::abs(fn(0.0));
  const double vL = std::abs(fn(length));
  if (v0 > kCompatTol || vL > kCompatTol) {
    throw CompatibilityError(
        "odd reflection needs zero endpoint values; got |fn(0)| = " +
        fmt(v0) + ", |fn(L)| = " + fmt(vL));
  }
  return reflect_extend(fn, length, /*odd=*/true);
}

Fn extend_even(const Fn& fn, double length) {
  require_positive(length, "length");
  return reflect_extend(fn, length, /*odd=*/false);
}

Fn hermite_bridge(double t0, std::span<const double> jet0, double t1,
                  std::span<const double> jet1) {
  if (jet0.empty() || jet0.size() != jet1.size()) {
    throw InvariantError("hermite_bridge: jets must be non-empty and match");
  }
  if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1) {
    throw InvariantError("hermite_bridge: nodes must be finite and distinct");
  }
  const int m = static_cast<int>(jet0.size()) - 1;
  const int n = 2 * (m + 1);
  const double delta = t1 - t0;

  std::vector<double> fact(static_cast<std::size_t>(m) + 1, 1.0);
  for (int j = 1; j <= m; ++j) {
    fact[static_cast<std::size_t>(j)] = fact[static_cast<std::size_t>(j - 1)] * j;
  }

  // Divided-difference table with repeated nodes: the first m+1 nodes sit at
  // t0, the rest at t1; coincident entries take jet[j]/j! directly.
  std::vector<double> z(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> dd(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool first = i <= m;
    z[static_cast<std::size_t>(i)] = first ? t0 : t1;
    const std::span<const double>& jet = first ? jet0 : jet1;
    dd[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1,
                                           0.0);
    dd[static_cast<std::size_t>(i)][0] = jet[0];
    for (int j = 1; j <= i; ++j) {
      const double zi = z[static_cast<std::size_t>(i)];
      const double zj = z[static_cast<std::size_t>(i - j)];
      if (zi == zj) {
        dd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            jet[static_cast<std::size_t>(j)] / fact[static_cast<std::size_t>(j)];
      } else {
        dd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (dd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] -
             dd[static_cast<std::size_t>(i - 1)]
               [static_cast<std::size_t>(j - 1)]) /
            (zi - zj);
      }
    }
  }

  // Expand the Newton form into monomial coefficients in (t - t0): multiply
  // by (u - c_j) from the innermost factor outward, adding each Newton
  // coefficient as the new constant term.
  std::vector<double> coeffs{dd[static_cast<std::size_t>(n - 1)]
                               [static_cast<std::size_t>(n - 1)]};
  for (int j = n - 2; j >= 0; --j) {
    const double c = (j <= m) ? 0.0 : delta;
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k + 1] += coeffs[k];
      next[k] -= c * coeffs[k];
    }
    next[0] += dd[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    coeffs = std::move(next);
  }
  return Fn::poly(t0, std::move(coeffs));
}

namespace {

// Shared boundary-extension construction. The extension P consists of four
// segments over knots {-L, 0, T, L, T+L}:
//   [-L, 0]  bridge from a free edge jet up to the start of `left`,
//   [0, T]   `left` itself,
//   [T, L]   bridge up to the jet forced by the two-endpoint identity,
//   [L, T+L] 2*right(s - L) - P(s - 2L), which lands back on the first
//            bridge's segment because horizon < length.
// jet_order is the contact order at the gluing points (3 or 2).
ExtendedBoundary extend_boundary_impl(const Fn& left, const Fn& right,
                                      double horizon, double length,
                                      int jet_order) {
  require_positive(horizon, "horizon");
  require_positive(length, "length");
  if (!(horizon < length)) {
    throw InvariantError(
        "boundary extension requires horizon < length; callers must exchange "
        "axes or reject first");
  }
  const double T = horizon;
  const double L = length;
  const std::size_t width = static_cast<std::size_t>(jet_order) + 1;

  const std::vector<double> a = jet_at(left, 0.0, jet_order, false);
  const std::vector<double> b = jet_at(left, T, jet_order, true);
  const std::vector<double> l0 = jet_at(right, 0.0, jet_order, false);

  // Free jet at the left edge of the domain: hold the value of `left` at 0
  // with all derivatives zero. Any smooth choice works; a level segment
  // keeps the extension's magnitude comparable to the data's.
  std::vector<double> e(width, 0.0);
  e[0] = a[0];

  // Jet forced at s = L by P(t+L) + P(t-L) = 2 right(t) evaluated at t = 0.
  std::vector<double> d(width, 0.0);
  for (std::size_t j = 0; j < width; ++j) d[j] = 2.0 * l0[j] - e[j];

  const Fn bridge_in = hermite_bridge(-L, e, 0.0, a);
  const Fn bridge_out = hermite_bridge(T, b, L, d);
  const Fn wrap =
      2.0 * shift_arg(right, -L) - shift_arg(bridge_in, -2.0 * L);

  ExtendedBoundary out;
  out.lo = -L;
  out.hi = T + L;
  out.fn = Fn::piecewise({-L, 0.0, T, L, T + L},
                         {bridge_in, left, bridge_out, wrap});

  // Contact residuals at the three gluing points, from the segment functions
  // themselves so both one-sided limits are unambiguous.
  struct Junction {
    double at;
    const Fn* lo_piece;
    const Fn* hi_piece;
    const char* tag;
  };
  const Junction junctions[] = {{0.0, &bridge_in, &left, "0"},
                                {T, &left, &bridge_out, "T"},
                                {L, &bridge_out, &wrap, "L"}};
  for (const Junction& jc : junctions) {
    for (int j = 0; j <= jet_order; ++j) {
      const double lo_v = (j == 0)
                              ? (*jc.lo_piece)(jc.at)
                              : jc.lo_piece->deriv_side(jc.at, j, true);
      const double hi_v = (j == 0)
                              ? (*jc.hi_piece)(jc.at)
                              : jc.hi_piece->deriv_side(jc.at, j, false);
      out.junctions.push_back(
          make_check("junction@" + std::string(jc.tag) + "#d" +
                         std::to_string(j),
                     std::abs(lo_v - hi_v), kCompatTol));
    }
  }

  double worst = 0.0;
  const int probes = 501;
  for (int i = 0; i < probes; ++i) {
    const double t = T * i / (probes - 1);
    worst = std::max(
        worst, std::abs(out.fn(t + L) + out.fn(t - L) - 2.0 * right(t)));
  }
  out.functional_residual = worst;
  return out;
}

}  // namespace

ExtendedBoundary extend_boundary_dirichlet(const Fn& left, const Fn& right,
                                           double horizon, double length) {
  return extend_boundary_impl(left, right, horizon, length, /*jet_order=*/3);
}

ExtendedBoundary extend_boundary_neumann(const Fn& left, const Fn& right,
                                         double horizon, double length) {
  return extend_boundary_impl(left, right, horizon, length, /*jet_order=*/2);
}

namespace {

// Running integral of a slope trace, as a function object with exact
// derivatives: value(x) = integral of `integrand` from 0 to x, so first and
// higher derivatives defer to the integrand itself.
class RunningIntegralFn final : public FnImpl {
 public:
  RunningIntegralFn(Fn integrand, double lo, double hi)
      : integrand_(std::move(integrand)),
        anti_(integrand_, lo, hi, /*cells_per_unit=*/4096) {}

  double value(double x) const override { return anti_.between(0.0, x); }

  double deriv(double x, int order) const override {
    return order == 1 ? integrand_(x) : integrand_.deriv(x, order - 1);
  }

  double deriv_side(double x, int order, bool from_left) const override {
    return order == 1 ? integrand_(x)
                      : integrand_.deriv_side(x, order - 1, from_left);
  }

  void breakpoints(double a, double b,
                   std::vector<double>& out) const override {
    integrand_.breakpoints(a, b, out);
  }

 private:
  Fn integrand_;
  Antiderivative anti_;
};

Fn running_integral(const Fn& integrand, double lo, double hi) {
  return Fn(std::make_shared<RunningIntegralFn>(integrand, lo, hi));
}

BoundedProblem lift_impl(const BoundedProblem& p, const Fn& potential,
                         double sign) {
  const double T = p.horizon;
  // Homogenized endpoint data: subtract the traveling contribution of the
  // boundary potential at t = 0 and t = horizon.
  BoundedProblem out;
  out.initial = p.initial - 0.5 * potential -
                (0.5 * sign) * affine_arg(potential, -1.0, 0.0);
  out.target = p.target - 0.5 * shift_arg(potential, T) -
               (0.5 * sign) * affine_arg(potential, -1.0, T);
  out.horizon = p.horizon;
  out.length = p.length;
  out.kind = p.kind;
  CompatReport rep = check_compat(out);
  if (!rep.pass()) {
    throw CompatibilityError(
        "lifted data fails its homogeneous endpoint conditions (worst "
        "residual " +
        fmt(rep.worst()) + ")");
  }
  return out;
}

}  // namespace

BoundedProblem lift_dirichlet(const BoundedProblem& p,
                              const ExtendedBoundary& ext) {
  if (p.kind != BoundaryKind::kDirichlet) {
    throw InvariantError("lift_dirichlet: problem kind mismatch");
  }
  return lift_impl(p, ext.fn, +1.0);
}

BoundedProblem lift_neumann(const BoundedProblem& p,
                            const ExtendedBoundary& ext) {
  if (p.kind != BoundaryKind::kNeumann) {
    throw InvariantError("lift_neumann: problem kind mismatch");
  }
  return lift_impl(p, running_integral(ext.fn, ext.lo, ext.hi), -1.0);
}

namespace {

// Clips evaluation to the rectangle [0,horizon] x [0,length] and forwards
// to the periodic solution field.
class RestrictedField final : public Field {
 public:
  RestrictedField(std::shared_ptr<const Field> base, double horizon,
                  double length)
      : base_(std::move(base)), horizon_(horizon), length_(length) {}

  double value(double t, double x) const override {
    guard(t, x);
    return base_->value(t, x);
  }
  double dt(double t, double x) const override {
    guard(t, x);
    return base_->dt(t, x);
  }
  double dx(double t, double x) const override {
    guard(t, x);
    return base_->dx(t, x);
  }
  double dtt(double t, double x) const override {
    guard(t, x);
    return base_->dtt(t, x);
  }
  double dxx(double t, double x) const override {
    guard(t, x);
    return base_->dxx(t, x);
  }
  double dtx(double t, double x) const override {
    guard(t, x);
    return base_->dtx(t, x);
  }

 private:
  void guard(double t, double x) const {
    const double st = 1e-9 * (1.0 + horizon_);
    const double sx = 1e-9 * (1.0 + length_);
    if (t < -st || t > horizon_ + st) {
      throw DomainError("time " + fmt(t) + " outside [0, " + fmt(horizon_) +
                        "]");
    }
    if (x < -sx || x > length_ + sx) {
      throw DomainError("position " + fmt(x) + " outside [0, " +
                        fmt(length_) + "]");
    }
  }

  std::shared_ptr<const Field> base_;
  double horizon_ = 0.0;
  double length_ = 0.0;
};

// Adds the boundary potential's traveling contribution back on top of the
// homogenized solution: y = base + (P(t+x) + sign * P(t-x)) / 2.
class TraceLiftField final : public Field {
 public:
  TraceLiftField(std::shared_ptr<const Field> base, Fn potential, double sign,
                 double lo, double hi)
      : base_(std::move(base)), p_(std::move(potential)), sign_(sign),
        lo_(lo), hi_(hi) {}

  double value(double t, double x) const override {
    const double b = base_->value(t, x);
    return b + 0.5 * (p(t + x, 0) + sign_ * p(t - x, 0));
  }
  double dt(double t, double x) const override {
    const double b = base_->dt(t, x);
    return b + 0.5 * (p(t + x, 1) + sign_ * p(t - x, 1));
  }
  double dx(double t, double x) const override {
    const double b = base_->dx(t, x);
    return b + 0.5 * (p(t + x, 1) - sign_ * p(t - x, 1));
  }
  double dtt(double t, double x) const override {
    const double b = base_->dtt(t, x);
    return b + 0.5 * (p(t + x, 2) + sign_ * p(t - x, 2));
  }
  double dxx(double t, double x) const override {
    const double b = base_->dxx(t, x);
    return b + 0.5 * (p(t + x, 2) + sign_ * p(t - x, 2));
  }
  double dtx(double t, double x) const override {
    const double b = base_->dtx(t, x);
    return b + 0.5 * (p(t + x, 2) - sign_ * p(t - x, 2));
  }

 private:
  double p(double u, int order) const {
    // The base field's domain guard has already run; u can exceed the
    // potential's domain only by accumulated slack, so clip it.
    const double v = std::clamp(u, lo_, hi_);
    return order == 0 ? p_(v) : p_.deriv(v, order);
  }

  std::shared_ptr<const Field> base_;
  Fn p_;
  double sign_ = 1.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

// Presents a solved field with the roles of time and space exchanged.
class TransposeField final : public Field {
 public:
  explicit TransposeField(std::shared_ptr<const Field> base)
      : base_(std::move(base)) {}

  double value(double t, double x) const override {
    return base_->value(x, t);
  }
  double dt(double t, double x) const override { return base_->dx(x, t); }
  double dx(double t, double x) const override { return base_->dt(x, t); }
  double dtt(double t, double x) const override { return base_->dxx(x, t); }
  double dxx(double t, double x) const override { return base_->dtt(x, t); }
  double dtx(double t, double x) const override { return base_->dtx(x, t); }

 private:
  std::shared_ptr<const Field> base_;
};

// Worst endpoint-profile and trace residuals, shared by every solve path.
void fill_probe_errors(BoundedSolution& out, const BoundedProblem& p) {
  const std::vector<double> xs = linspace(0.0, p.length, 2001);
  double e0 = 0.0;
  double e1 = 0.0;
  for (double x : xs) {
    e0 = std::max(e0, std::abs(out.field->value(0.0, x) - p.initial(x)));
    e1 = std::max(e1,
                  std::abs(out.field->value(p.horizon, x) - p.target(x)));
  }
  out.initial_error = e0;
  out.terminal_error = e1;

  const std::vector<double> ts = linspace(0.0, p.horizon, 301);
  const bool dirichlet = p.kind == BoundaryKind::kDirichlet;
  double left = 0.0;
  double right = 0.0;
  for (double t : ts) {
    const double lv = dirichlet ? out.field->value(t, 0.0)
                                : out.field->dx(t, 0.0);
    const double rv = dirichlet ? out.field->value(t, p.length)
                                : out.field->dx(t, p.length);
    const double lref = p.left_trace ? (*p.left_trace)(t) : 0.0;
    const double rref = p.right_trace ? (*p.right_trace)(t) : 0.0;
    left = std::max(left, std::abs(lv - lref));
    right = std::max(right, std::abs(rv - rref));
  }
  out.left_trace_error = left;
  out.right_trace_error = right;
}

}  // namespace

BoundedSolution solve_homogeneous(const BoundedProblem& p, double tol) {
  require_problem_shape(p);
  if (!p.homogeneous()) {
    throw InvariantError(
        "solve_homogeneous: endpoint traces present; use solve_inhomogeneous");
  }
  CompatReport rep = check_compat(p);
  if (!rep.pass()) {
    throw CompatibilityError("endpoint conditions fail (worst residual " +
                             fmt(rep.worst()) + ")");
  }

  const bool dirichlet = p.kind == BoundaryKind::kDirichlet;
  PeriodicProblem reflected;
  reflected.initial = dirichlet ? extend_odd(p.initial, p.length)
                                : extend_even(p.initial, p.length);
  reflected.target = dirichlet ? extend_odd(p.target, p.length)
                               : extend_even(p.target, p.length);
  reflected.horizon = p.horizon;
  reflected.length = 2.0 * p.length;

  BoundedSolution out;
  out.spectral = solve_periodic(reflected, tol);
  out.field = std::make_shared<RestrictedField>(out.spectral.field,
                                                p.horizon, p.length);
  out.velocity = out.spectral.velocity;
  out.compat = rep.checks;
  fill_probe_errors(out, p);
  return out;
}

BoundedSolution solve_inhomogeneous(const BoundedProblem& p, double tol) {
  require_problem_shape(p);
  if (p.homogeneous()) {
    throw InvariantError(
        "solve_inhomogeneous: no endpoint traces; use solve_homogeneous");
  }
  CompatReport rep = check_compat(p);
  if (!rep.pass()) {
    throw CompatibilityError("endpoint conditions fail (worst residual " +
                             fmt(rep.worst()) + ")");
  }
  // Reject integer and irrational horizon/length ratios up front, in the
  // problem's original orientation.
  rationality_check(p.horizon, 2.0 * p.length);

  const bool dirichlet = p.kind == BoundaryKind::kDirichlet;
  if (!dirichlet && p.horizon >= p.length) {
    throw AdmissibilityError(
        "horizon-exceeds-length",
        "slope-data solves need horizon < length; got horizon = " +
            fmt(p.horizon) + ", length = " + fmt(p.length));
  }

  if (dirichlet && p.horizon > p.length) {
    // Exchange the roles of time and space: the endpoint traces become the
    // endpoint profiles of a problem whose horizon is now the shorter side,
    // solve that, and read the answer back transposed.
    BoundedProblem swapped;
    swapped.initial = *p.left_trace;
    swapped.target = *p.right_trace;
    swapped.left_trace = p.initial;
    swapped.right_trace = p.target;
    swapped.horizon = p.length;
    swapped.length = p.horizon;
    swapped.kind = BoundaryKind::kDirichlet;

    BoundedSolution inner = solve_inhomogeneous(swapped, tol);
    BoundedSolution out;
    out.spectral = inner.spectral;
    out.field = std::make_shared<TransposeField>(inner.field);
    out.compat = rep.checks;
    out.boundary_extension = inner.boundary_extension;
    out.transposed = true;
    std::shared_ptr<const Field> fld = out.field;
    out.velocity = Fn::from_callable(
        [fld](double x) { return fld->dt(0.0, x); }, 1e-4);
    fill_probe_errors(out, p);
    return out;
  }

  ExtendedBoundary ext =
      dirichlet
          ? extend_boundary_dirichlet(*p.left_trace, *p.right_trace,
                                      p.horizon, p.length)
          : extend_boundary_neumann(*p.left_trace, *p.right_trace, p.horizon,
                                    p.length);
  const Fn potential =
      dirichlet ? ext.fn : running_integral(ext.fn, ext.lo, ext.hi);
  const double sign = dirichlet ? +1.0 : -1.0;

  BoundedProblem lifted = lift_impl(p, potential, sign);
  BoundedSolution base = solve_homogeneous(lifted, tol);

  BoundedSolution out;
  out.spectral = base.spectral;
  out.field = std::make_shared<TraceLiftField>(base.field, potential, sign,
                                               ext.lo, ext.hi);
  out.compat = rep.checks;
  out.boundary_extension = std::move(ext);
  std::shared_ptr<const Field> fld = out.field;
  out.velocity = Fn::from_callable(
      [fld](double x) { return fld->dt(0.0, x); }, 1e-4);
  fill_probe_errors(out, p);
  return out;
}

BoundedSolution solve_bounded(const BoundedProblem& p, double tol) {
  return p.homogeneous() ? solve_homogeneous(p, tol)
                         : solve_inhomogeneous(p, tol);
}

}  // namespace wavectl
