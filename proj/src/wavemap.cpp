#include "wavectl/wavemap.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wavectl/errors.hpp"

namespace wavectl {

namespace {

constexpr double kSignSlack = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("horizon must be positive and finite");
  }
}

double probe_radius(double horizon) { return 5.0 * (horizon + 1.0); }

// Minimum of fn over [a, b]: dense scan plus a golden-section refinement
// inside the best bracket.
double min_on_interval(const Fn& fn, double a, double b, int samples) {
  double best = fn(a);
  double best_x = a;
  for (int i = 1; i < samples; ++i) {
    const double x = a + (b - a) * i / (samples - 1);
    const double v = fn(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  const double cell = (b - a) / (samples - 1);
  double lo = std::max(a, best_x - cell);
  double hi = std::min(b, best_x + cell);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = fn(x1);
  double f2 = fn(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = fn(x2);
    }
  }
  return std::min(best, std::min(f1, f2));
}

}  // namespace

OrderingCheck check_ordering(const WaveMapProblem& p) {
  require_horizon(p.horizon);
  const double r = probe_radius(p.horizon);
  const int n = 4001;
  OrderingCheck out;
  out.inf_initial = p.initial(-r);
  out.arg_inf = -r;
  out.sup_target = p.target(-r);
  out.arg_sup = -r;
  for (int i = 1; i < n; ++i) {
    const double x = -r + 2.0 * r * i / (n - 1);
    const double fv = p.initial(x);
    const double gv = p.target(x);
    if (fv < out.inf_initial) {
      out.inf_initial = fv;
      out.arg_inf = x;
    }
    if (gv > out.sup_target) {
      out.sup_target = gv;
      out.arg_sup = x;
    }
  }
  return out;
}

LineProblem to_linear(const WaveMapProblem& p) {
  const OrderingCheck oc = check_ordering(p);
  if (!oc.ok()) {
    throw OrderingViolatedError(
        "initial profile must sit strictly above the target: initial(" +
        fmt(oc.arg_inf) + ") = " + fmt(oc.inf_initial) + " vs target(" +
        fmt(oc.arg_sup) + ") = " + fmt(oc.sup_target));
  }
  LineProblem lp;
  lp.initial = exp_of(-1.0 * p.initial);
  lp.target = exp_of(-1.0 * p.target);
  lp.horizon = p.horizon;
  lp.speed = 1.0;
  return lp;
}

NonnegReport check_nonneg_condition(const Fn& reduced, double horizon,
                                    int max_bucket) {
  require_horizon(horizon);
  if (max_bucket < 1) {
    throw InvariantError("max_bucket must be at least 1");
  }
  const double t = horizon;
  NonnegReport rep;

  // Band-by-band partial sums. For x in the N-th band the synthesized
  // velocity is germ(x - 2NT) + 2 * S_N(x), so S_N is the sum whose sign
  // matters there; its arguments all fall in (0, 2NT) where bands overlap
  // with the slope scan below.
  const int per_band = 256;
  rep.worst = 0.0;
  for (int band = 1; band <= max_bucket; ++band) {
    const double lo = (2.0 * band - 1.0) * t;
    for (int j = 0; j < per_band; ++j) {
      const double x = lo + 2.0 * t * (j + 0.5) / per_band;
      double right_sum = 0.0;
      double left_sum = 0.0;
      for (int i = 1; i <= band; ++i) {
        const double off = (2.0 * i - 1.0) * t;
        right_sum += reduced.deriv(x - off, 1);
        left_sum += reduced.deriv(-x + off, 1);
      }
      if (-right_sum > rep.worst) {
        rep.worst = -right_sum;
        rep.worst_x = x;
        rep.worst_bucket = band;
      }
      if (left_sum > rep.worst) {
        rep.worst = left_sum;
        rep.worst_x = -x;
        rep.worst_bucket = band;
      }
    }
  }
  rep.grid_pass = rep.worst <= kSignSlack;

  // Recognized sufficient shapes (informative only).
  const double span = (2.0 * max_bucket + 1.0) * t;
  const int n = 1024;
  bool monotone = true;
  double slope_scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = span * (i + 0.5) / n;
    const double right = reduced.deriv(x, 1);
    const double left = reduced.deriv(-x, 1);
    slope_scale = std::max(slope_scale, std::max(std::abs(right),
                                                 std::abs(left)));
    if (right < -kSignSlack || left > kSignSlack) monotone = false;
  }
  rep.monotone_pattern = monotone;

  bool rising = true;
  for (int i = 0; i < 512; ++i) {
    const double x = 2.0 * t * (i + 0.5) / 512;
    if (reduced.deriv(x, 1) < -kSignSlack) {
      rising = false;
      break;
    }
  }
  bool antiperiodic = rising;
  if (rising) {
    const double tol = 1e-7 * (1.0 + slope_scale);
    for (int i = 0; i < n; ++i) {
      const double x = -span + (2.0 * span - 2.0 * t) * i / (n - 1);
      if (std::abs(reduced.deriv(x, 1) + reduced.deriv(x + 2.0 * t, 1)) >
          tol) {
        antiperiodic = false;
        break;
      }
    }
  }
  rep.alternating_pattern = antiperiodic;
  return rep;
}

SeedFunction build_nonneg_seed(const ReducedTarget& rt, double halfwidth) {
  require_horizon(halfwidth);
  const double t = halfwidth;
  const double a0 = rt.value0;
  const double b0 = rt.slope0;
  const double c0 = rt.curv0;
  if (!(a0 > 0.0)) {
    throw NoNonnegativeSeedError(
        "germ integral is 2 * reduced(0) = " + fmt(2.0 * a0) +
        "; a nonnegative germ needs reduced(0) > 0");
  }

  SeedFunction quad = seed_polynomial(rt, t);
  const double scale = 1.0 + std::abs(a0) / t + std::abs(b0) +
                       std::abs(c0) * t;
  if (min_on_interval(quad.fn, -t, t, 2001) >= -1e-12 * scale) {
    return quad;
  }

  // Quadratic germ plus lam * ((1 - (x/t)^2)^2 - 8/15): the bump vanishes to
  // first order at both ends and the constant offset cancels its integral,
  // so all three germ moments survive for every lam. The minimum over
  // [-t, t] is concave in lam; maximize it by golden section.
  const double q0 = a0 / t - c0 * t / 6.0;
  const double q1 = b0 / t;
  const double q2 = c0 / (2.0 * t);
  auto member = [&](double lam) {
    return Fn::poly(0.0, {q0 + lam * 7.0 / 15.0, q1,
                          q2 - 2.0 * lam / (t * t), 0.0,
                          lam / (t * t * t * t)});
  };
  const double edge = std::min(quad.fn(t), quad.fn(-t));
  const double lam_hi = std::max(0.0, edge * 15.0 / 8.0);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = lam_hi;
  double l1 = hi - gr * (hi - lo);
  double l2 = lo + gr * (hi - lo);
  double m1 = min_on_interval(member(l1), -t, t, 1001);
  double m2 = min_on_interval(member(l2), -t, t, 1001);
  for (int it = 0; it < 100; ++it) {
    if (m1 > m2) {
      hi = l2;
      l2 = l1;
      m2 = m1;
      l1 = hi - gr * (hi - lo);
      m1 = min_on_interval(member(l1), -t, t, 1001);
    } else {
      lo = l1;
      l1 = l2;
      m1 = m2;
      l2 = lo + gr * (hi - lo);
      m2 = min_on_interval(member(l2), -t, t, 1001);
    }
  }
  const double lam = (m1 > m2) ? l1 : l2;
  const double best = std::max(m1, m2);
  if (best < -1e-12 * scale) {
    throw NoNonnegativeSeedError(
        "germ moments force a sign change: best achievable minimum over "
        "the search family is " +
        fmt(best));
  }
  SeedFunction out;
  out.fn = member(lam);
  out.halfwidth = t;
  out.kind = SeedKind::kUser;
  return out;
}

namespace {

// y = -ln z with derivatives by the chain rule; every evaluation re-checks
// that z is positive.
class NegLogField final : public Field {
 public:
  explicit NegLogField(std::shared_ptr<const Field> base)
      : base_(std::move(base)) {}

  double value(double t, double x) const override {
    return -std::log(positive(t, x));
  }
  double dt(double t, double x) const override {
    return -base_->dt(t, x) / positive(t, x);
  }
  double dx(double t, double x) const override {
    return -base_->dx(t, x) / positive(t, x);
  }
  double dtt(double t, double x) const override {
    const double z = positive(t, x);
    const double zt = base_->dt(t, x);
    return (zt * zt - z * base_->dtt(t, x)) / (z * z);
  }
  double dxx(double t, double x) const override {
    const double z = positive(t, x);
    const double zx = base_->dx(t, x);
    return (zx * zx - z * base_->dxx(t, x)) / (z * z);
  }
  double dtx(double t, double x) const override {
    const double z = positive(t, x);
    return (base_->dt(t, x) * base_->dx(t, x) - z * base_->dtx(t, x)) /
           (z * z);
  }

 private:
  double positive(double t, double x) const {
    const double z = base_->value(t, x);
    if (!(z > 0.0)) {
      throw PositivityLostError("substituted solution is " + fmt(z) +
                                " at t = " + fmt(t) + ", x = " + fmt(x) +
                                "; cannot take its logarithm");
    }
    return z;
  }

  std::shared_ptr<const Field> base_;
};

}  // namespace

WaveMapSolution solve_wavemap(const WaveMapProblem& p) {
  require_horizon(p.horizon);
  WaveMapSolution out;
  out.ordering = check_ordering(p);
  if (!out.ordering.ok()) {
    throw OrderingViolatedError(
        "initial profile must sit strictly above the target: initial(" +
        fmt(out.ordering.arg_inf) + ") = " + fmt(out.ordering.inf_initial) +
        " vs target(" + fmt(out.ordering.arg_sup) + ") = " +
        fmt(out.ordering.sup_target));
  }

  LineProblem lp;
  lp.initial = exp_of(-1.0 * p.initial);
  lp.target = exp_of(-1.0 * p.target);
  lp.horizon = p.horizon;
  lp.speed = 1.0;
  const ReducedTarget rt = reduce_target(lp);

  const double r = probe_radius(p.horizon);
  for (int i = 0; i < 4001; ++i) {
    const double x = -r + 2.0 * r * i / 4000;
    const double v = rt.profile(x);
    if (!(v > 0.0)) {
      throw OrderingViolatedError("reduced target is " + fmt(v) +
                                  " at x = " + fmt(x) +
                                  "; the ordering margin does not survive "
                                  "the substitution");
    }
  }

  out.nonneg = check_nonneg_condition(rt.profile, p.horizon);
  if (!out.nonneg.pass()) {
    throw NonnegConditionError(
        "slope sums have the wrong sign: bucket " +
        std::to_string(out.nonneg.worst_bucket) + " at x = " +
        fmt(out.nonneg.worst_x) + " misses by " + fmt(out.nonneg.worst));
  }

  LineSolveOptions opt;
  opt.user_seed = build_nonneg_seed(rt, p.horizon);
  out.linear = solve_line(lp, opt);

  double min_z = out.linear.field->value(0.0, -r);
  const int nt = 21;
  const int nx = 1001;
  for (int i = 0; i < nt; ++i) {
    const double t = p.horizon * i / (nt - 1);
    for (int j = 0; j < nx; ++j) {
      const double x = -r + 2.0 * r * j / (nx - 1);
      min_z = std::min(min_z, out.linear.field->value(t, x));
    }
  }
  out.min_z = min_z;
  if (!(min_z > 0.0)) {
    throw PositivityLostError(
        "substituted solution reaches " + fmt(min_z) +
        " on the probe grid despite a nonnegative velocity");
  }

  out.field = std::make_shared<NegLogField>(out.linear.field);
  std::shared_ptr<const Field> fld = out.field;
  out.velocity =
      Fn::from_callable([fld](double x) { return fld->dt(0.0, x); }, 1e-4);

  double e0 = 0.0;
  double e1 = 0.0;
  for (int i = 0; i < 2001; ++i) {
    const double x = -r + 2.0 * r * i / 2000;
    e0 = std::max(e0, std::abs(out.field->value(0.0, x) - p.initial(x)));
    e1 = std::max(e1,
                  std::abs(out.field->value(p.horizon, x) - p.target(x)));
  }
  out.initial_error = e0;
  out.terminal_error = e1;
  return out;
}

}  // namespace wavectl
