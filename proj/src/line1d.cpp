#include "wavectl/line1d.hpp"

#include <algorithm>
#include <cmath>

#include "wavectl/errors.hpp"

namespace wavectl {

namespace {

// Velocity synthesized from the germ: marching outward, each crossing of an
// odd multiple of T folds in another slope term of the reduced target. The
// germ conditions make the value and the first derivative line up across
// every seam.
class SynthVelocityFn final : public FnImpl {
 public:
  SynthVelocityFn(Fn germ, Fn profile, double halfwidth)
      : u_(std::move(germ)), profile_(std::move(profile)), T_(halfwidth) {}

  double value(double x) const override { return eval(x, 0, branch_index(x)); }

  double deriv(double x, int order) const override {
    if (order > 2) {
      // Third derivatives would need the fourth derivative of the target
      // profile; fall back to a centered difference of the second.
      double h = 1e-4 * std::max(1.0, std::fabs(x));
      return (deriv(x + h, 2) - deriv(x - h, 2)) / (2.0 * h);
    }
    return eval(x, order, branch_index(x));
  }

  double deriv_side(double x, int order, bool from_left) const override {
    if (order > 2) return deriv(x, order);
    long n = branch_index(x);
    // At a seam the two adjacent branches meet; pick the one the caller asked
    // for. Branch counts grow away from the origin, so the inner branch is
    // the left one for x > 0 and the right one for x < 0. The branch pair is
    // recomputed from the rounded seam ratio because the floor in
    // branch_index can land on either side of the seam.
    if (at_seam(x)) {
      const long outer = std::lround((std::fabs(x) + T_) / (2.0 * T_));
      const bool wants_inner = (x >= 0.0) ? from_left : !from_left;
      n = std::max(0L, wants_inner ? outer - 1 : outer);
    }
    return eval(x, order, n);
  }

  void breakpoints(double a, double b, std::vector<double>& out) const override {
    // Seams at odd multiples of T; the germ's own kinks land at even
    // multiples. Split at all of them.
    double k0 = std::ceil(a / T_);
    for (double k = k0; k * T_ < b; k += 1.0) {
      double s = k * T_;
      if (s > a && s < b) out.push_back(s);
    }
  }

 private:
  long branch_index(double x) const {
    return static_cast<long>(std::floor((std::fabs(x) + T_) / (2.0 * T_)));
  }

  bool at_seam(double x) const {
    double r = (std::fabs(x) + T_) / (2.0 * T_);
    return std::fabs(r - std::round(r)) <= 1e-12 * (1.0 + std::fabs(r));
  }

  double eval(double x, int order, long n) const {
    double dn = static_cast<double>(n);
    if (x >= 0.0) {
      double s = (order == 0) ? u_(x - 2.0 * dn * T_)
                              : u_.deriv(x - 2.0 * dn * T_, order);
      for (long i = 1; i <= n; ++i)
        s += 2.0 * profile_.deriv(x - (2.0 * static_cast<double>(i) - 1.0) * T_,
                                  order + 1);
      return s;
    }
    double s = (order == 0) ? u_(x + 2.0 * dn * T_)
                            : u_.deriv(x + 2.0 * dn * T_, order);
    for (long i = 1; i <= n; ++i)
      s -= 2.0 * profile_.deriv(x + (2.0 * static_cast<double>(i) - 1.0) * T_,
                                order + 1);
    return s;
  }

  Fn u_, profile_;
  double T_;
};

void check_problem(const LineProblem& p) {
  if (!(p.horizon > 0.0)) throw InvariantError("horizon must be positive");
  if (!(p.speed > 0.0)) throw InvariantError("speed must be positive");
  if (!p.initial || !p.target) throw InvariantError("missing profile");
  for (double x : {-1.0, 0.0, 1.0, p.horizon}) {
    if (!std::isfinite(p.initial.deriv(x, 2)) ||
        !std::isfinite(p.target.deriv(x, 2)))
      throw DomainError("profiles must be twice differentiable");
  }
}

}  // namespace

LineProblem normalize_speed(const LineProblem& p) {
  if (p.speed == 1.0) return p;
  return LineProblem{affine_arg(p.initial, p.speed, 0.0),
                     affine_arg(p.target, p.speed, 0.0), p.horizon, 1.0};
}

ReducedTarget reduce_target(const LineProblem& p) {
  if (p.speed != 1.0)
    throw InvariantError("reduce_target expects a unit-speed problem");
  double T = p.horizon;
  Fn profile = lin_combo(0.0, {{1.0, p.target},
                               {-0.5, shift_arg(p.initial, -T)},
                               {-0.5, shift_arg(p.initial, T)}});
  ReducedTarget rt;
  rt.profile = profile;
  rt.value0 = profile(0.0);
  rt.slope0 = profile.deriv(0.0, 1);
  rt.curv0 = profile.deriv(0.0, 2);
  return rt;
}

SeedFunction seed_polynomial(const ReducedTarget& rt, double halfwidth) {
  double T = halfwidth;
  Fn u = Fn::poly(0.0, {rt.value0 / T - rt.curv0 * T / 6.0, rt.slope0 / T,
                        rt.curv0 / (2.0 * T)});
  return SeedFunction{u, T, SeedKind::kPolynomial};
}

SeedFunction seed_trig(const ReducedTarget& rt, double halfwidth) {
  double T = halfwidth;
  double jump = 2.0 * rt.slope0 - T * rt.curv0;
  double level = rt.value0 / T + (7.0 / 12.0) * T * rt.curv0 -
                 1.5 * rt.slope0;
  // Sinusoidal half on [-T, 0): level + jump/2 + (jump/2) cos(pi x / T).
  Fn left = Fn::trig_series(level + 0.5 * jump, 2.0 * T, {0.5 * jump}, {});
  // Quadratic half on [0, T].
  Fn right = Fn::poly(0.0, {level + jump, 0.0, rt.curv0 / T});
  Fn u = Fn::piecewise({-T, 0.0, T}, {left, right});
  return SeedFunction{u, T, SeedKind::kTrigonometric};
}

SeedCheck check_seed(const SeedFunction& seed, const ReducedTarget& rt,
                     const Quadrature& quad) {
  double T = seed.halfwidth;
  const Fn& u = seed.fn;
  SeedCheck out;
  out.integral_residual =
      std::fabs(quad.integrate(u, -T, T) - 2.0 * rt.value0);
  out.jump_residual = std::fabs(u(T) - u(-T) - 2.0 * rt.slope0);
  double dplus, dminus;
  if (seed.kind == SeedKind::kUser) {
    // One-sided three-point stencils: the germ may be anything callable.
    double h = 1e-5 * std::max(T, 1.0);
    dminus = (3.0 * u(T) - 4.0 * u(T - h) + u(T - 2.0 * h)) / (2.0 * h);
    dplus = (-3.0 * u(-T) + 4.0 * u(-T + h) - u(-T + 2.0 * h)) / (2.0 * h);
  } else {
    dminus = u.deriv_side(T, 1, /*from_left=*/true);
    dplus = u.deriv_side(-T, 1, /*from_left=*/false);
  }
  out.corner_residual = std::fabs(dminus - dplus - 2.0 * rt.curv0);
  return out;
}

Fn synth_velocity(const SeedFunction& seed, const ReducedTarget& rt) {
  SeedCheck chk = check_seed(seed, rt);
  if (!chk.pass(1e-8))
    throw InvariantError("seed does not satisfy the germ conditions");
  return Fn(std::make_shared<SynthVelocityFn>(seed.fn, rt.profile,
                                              seed.halfwidth));
}

double dalembert_eval(const Fn& initial, const Fn& velocity, double t,
                      double x, const Quadrature& quad) {
  return 0.5 * (initial(x - t) + initial(x + t)) +
         0.5 * quad.integrate(velocity, x - t, x + t);
}

LineSolution::LineSolution(Fn initial, Fn velocity, double horizon,
                           double speed, const LineSolveOptions& opt)
    : f_(std::move(initial)),
      v_(std::move(velocity)),
      horizon_(horizon),
      speed_(speed),
      quad_(opt.quad) {
  if (opt.table_cells_per_unit > 0) {
    double R = opt.table_halfspan > 0.0
                   ? opt.table_halfspan
                   : 5.0 * (horizon_ + 1.0) + horizon_ + 1.0;
    table_ = std::make_shared<Antiderivative>(v_, -R, R,
                                              opt.table_cells_per_unit, quad_);
  }
}

void LineSolution::check_time(double t) const {
  double slack = 1e-9 * (1.0 + horizon_);
  if (t < -slack || t > horizon_ + slack)
    throw DomainError("time outside [0, horizon]");
}

double LineSolution::velocity_integral(double a, double b) const {
  if (table_) return table_->between(a, b);
  return quad_.integrate(v_, a, b);
}

double LineSolution::value(double t, double x) const {
  check_time(t);
  double xi = x / speed_;
  return 0.5 * (f_(xi - t) + f_(xi + t)) +
         0.5 * velocity_integral(xi - t, xi + t);
}

double LineSolution::reduced_value(double t, double x) const {
  check_time(t);
  double xi = x / speed_;
  return 0.5 * velocity_integral(xi - t, xi + t);
}

double LineSolution::dt(double t, double x) const {
  check_time(t);
  double xi = x / speed_;
  return 0.5 * (-f_.deriv(xi - t, 1) + f_.deriv(xi + t, 1)) +
         0.5 * (v_(xi + t) + v_(xi - t));
}

double LineSolution::dx(double t, double x) const {
  check_time(t);
  double xi = x / speed_;
  return (0.5 * (f_.deriv(xi - t, 1) + f_.deriv(xi + t, 1)) +
          0.5 * (v_(xi + t) - v_(xi - t))) /
         speed_;
}

double LineSolution::dtt(double t, double x) const {
  check_time(t);
  double xi = x / speed_;
  return 0.5 * (f_.deriv(xi - t, 2) + f_.deriv(xi + t, 2)) +
         0.5 * (v_.deriv(xi + t, 1) - v_.deriv(xi - t, 1));
}

double LineSolution::dxx(double t, double x) const {
  // Same as dtt up to the speed scaling: the evaluator satisfies the
  // equation identically.
  return dtt(t, x) / (speed_ * speed_);
}

double LineSolution::dtx(double t, double x) const {
  check_time(t);
  double xi = x / speed_;
  return (0.5 * (-f_.deriv(xi - t, 2) + f_.deriv(xi + t, 2)) +
          0.5 * (v_.deriv(xi + t, 1) + v_.deriv(xi - t, 1))) /
         speed_;
}

ControlSolution solve_line(const LineProblem& p, const LineSolveOptions& opt) {
  check_problem(p);
  LineProblem pn = normalize_speed(p);
  ReducedTarget rt = reduce_target(pn);
  SeedFunction seed;
  if (opt.user_seed) {
    seed = *opt.user_seed;
    if (!check_seed(seed, rt, opt.quad).pass(1e-8))
      throw InvariantError("user seed fails the germ conditions");
  } else if (opt.seed == SeedKind::kTrigonometric) {
    seed = seed_trig(rt, pn.horizon);
  } else {
    seed = seed_polynomial(rt, pn.horizon);
  }
  Fn v = synth_velocity(seed, rt);
  auto field =
      std::make_shared<LineSolution>(pn.initial, v, pn.horizon, p.speed, opt);
  Fn v_out = (p.speed == 1.0) ? v : affine_arg(v, 1.0 / p.speed, 0.0);
  return ControlSolution{v_out, field, p, rt, seed};
}

std::vector<ControlSolution> solve_vector_line(
    std::span<const LineProblem> components, const LineSolveOptions& opt) {
  std::vector<ControlSolution> out;
  if (components.empty()) return out;
  double T = components[0].horizon, c = components[0].speed;
  for (const LineProblem& p : components) {
    if (p.horizon != T || p.speed != c)
      throw InvariantError("vector components must share horizon and speed");
    out.push_back(solve_line(p, opt));
  }
  return out;
}

ControlSolution add_null_velocity(const ControlSolution& sol,
                                  const NullVelocity& null_v,
                                  const LineSolveOptions& opt) {
  double T = sol.problem.horizon;
  if (std::fabs(null_v.halfwidth - T) > 1e-12 * (1.0 + T))
    throw InvariantError("null velocity halfwidth must match the horizon");
  auto period = null_v.fn.period();
  if (!period || std::fabs(*period - 2.0 * T) > 1e-12 * (1.0 + T))
    throw InvariantError("null velocity must declare period 2T");
  double mean = opt.quad.integrate(null_v.fn, -T, T);
  if (std::fabs(mean) > 1e-9)
    throw InvariantError("null velocity must have zero integral over [-T, T]");

  LineProblem pn = normalize_speed(sol.problem);
  Fn v_new = sol.field->velocity() + null_v.fn;
  auto field = std::make_shared<LineSolution>(pn.initial, v_new, T,
                                              sol.problem.speed, opt);
  Fn v_out = (sol.problem.speed == 1.0)
                 ? v_new
                 : affine_arg(v_new, 1.0 / sol.problem.speed, 0.0);
  return ControlSolution{v_out, field, sol.problem, sol.reduced, sol.seed};
}

double volterra_residual(const ControlSolution& sol,
                         std::span<const double> grid) {
  double T = sol.problem.horizon;
  double worst = 0.0;
  for (double x : grid) {
    double lhs = 0.5 * sol.field->velocity_integral(x - T, x + T);
    worst = std::max(worst, std::fabs(lhs - sol.reduced.profile(x)));
  }
  return worst;
}

double quadrilateral_residual(const LineSolution& sol, double t1, double t2,
                              double x) {
  double tm = 0.5 * (t1 + t2);
  double dxh = 0.5 * (t2 - t1);
  double a = sol.reduced_value(t1, x);
  double d = sol.reduced_value(t2, x);
  double b = sol.reduced_value(tm, x - dxh * sol.speed());
  double c = sol.reduced_value(tm, x + dxh * sol.speed());
  return std::fabs(a + d - b - c);
}

}  // namespace wavectl
