#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wavectl/errors.hpp"
#include "wavectl/expr.hpp"
#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/periodic.hpp"
#include "wavectl/verify.hpp"

using namespace wavectl;

namespace {

constexpr double kPi = 3.14159265358979323846;

Fn periodic_expr(const std::string& text, double length) {
  return Fn::parse(text).with_period(length);
}

Fn zero_fn(double length) { return periodic_expr("0", length); }

// Rebuild a function from its analysis table (the table stores twice the
// mean in slot zero).
Fn resynthesize(const CoeffTable& t) {
  std::vector<double> ca(t.cos_coef.begin() + 1, t.cos_coef.end());
  std::vector<double> sa(t.sin_coef.begin() + 1, t.sin_coef.end());
  return Fn::trig_series(0.5 * t.cos_coef[0], t.length, ca, sa);
}

}  // namespace

TEST_CASE("analysis recovers trigonometric coefficients") {
  const Fn sine = periodic_expr("sin(2*pi*x)", 1.0);
  const CoeffTable t = fourier_analyze(sine, 1.0, 8);
  CHECK(t.max_mode() == 8);
  CHECK(t.sin_coef[1] == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 0; k <= 8; ++k) {
    if (k != 1) CHECK(std::abs(t.sin_coef[k]) <= 1e-10);
    CHECK(std::abs(t.cos_coef[k]) <= 1e-10);
  }

  const Fn one = periodic_expr("1", 1.0);
  const CoeffTable u = fourier_analyze(one, 1.0, 4);
  CHECK(std::abs(u.cos_coef[0] - 2.0) <= 1e-12);
  for (int k = 1; k <= 4; ++k) {
    CHECK(std::abs(u.cos_coef[k]) <= 1e-12);
    CHECK(std::abs(u.sin_coef[k]) <= 1e-12);
  }

  const Fn mix = periodic_expr("1 + 0.5*cos(2*pi*x)", 1.0);
  const CoeffTable v = fourier_analyze(mix, 1.0, 4);
  CHECK(v.cos_coef[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.cos_coef[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(v.cos_coef[2]) <= 1e-12);
}

TEST_CASE("analysis requires a declared, honest period") {
  CHECK_THROWS_AS(fourier_analyze(Fn::parse("sin(x)"), 1.0, 4), DomainError);
  CHECK_THROWS_AS(fourier_analyze(periodic_expr("x", 1.0), 1.0, 4),
                  DomainError);
  CHECK_THROWS_AS(
      fourier_analyze(periodic_expr("sin(2*pi*x)", 2.0), 1.0, 4),
      DomainError);
  CHECK_THROWS_AS(fourier_analyze(periodic_expr("0", 1.0), 1.0, 0),
                  DomainError);
}

TEST_CASE("band-limited round trip is exact") {
  const double length = 2.0;
  const Fn f = Fn::trig_series(0.3, length, {0.5, -0.25, 0.125},
                               {-0.7, 0.4, -0.1});
  const CoeffTable t = fourier_analyze(f, length, 16);
  CHECK(t.cos_coef[0] == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(t.cos_coef[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(t.sin_coef[3] == doctest::Approx(-0.1).epsilon(1e-12));
  const Fn back = resynthesize(t);
  const auto xs = linspace(0.0, length, 257);
  CHECK(max_abs_diff(f, back, xs) <= 1e-10);
}

TEST_CASE("parallel and serial analysis agree bit for bit") {
  const Fn f = periodic_expr("exp(sin(2*pi*x)) - 0.3*cos(4*pi*x)", 1.0);
  const CoeffTable a = fourier_analyze(f, 1.0, 32);
  const CoeffTable b = fourier_analyze_serial(f, 1.0, 32);
  REQUIRE(a.cos_coef.size() == b.cos_coef.size());
  for (size_t k = 0; k < a.cos_coef.size(); ++k) {
    CHECK(a.cos_coef[k] == b.cos_coef[k]);
    CHECK(a.sin_coef[k] == b.sin_coef[k]);
  }
}

TEST_CASE("ratio recognition: fractions, integers, irrationals") {
  const RationalRatio half = rationality_check(0.25, 1.0);
  CHECK(half.num == 1);
  CHECK(half.den == 2);
  CHECK(half.divisor_bound == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(half.resonant_mode(2));
  CHECK_FALSE(half.resonant_mode(3));

  const RationalRatio third = rationality_check(1.0 / 3.0, 1.0);
  CHECK(third.num == 2);
  CHECK(third.den == 3);
  CHECK(std::abs(third.divisor_bound - std::sqrt(3.0) / 2.0) <= 1e-12);

  CHECK_THROWS_AS(rationality_check(1.0, 1.0), ResonantRatioError);
  CHECK_THROWS_AS(rationality_check(0.5, 1.0), ResonantRatioError);
  CHECK_THROWS_AS(rationality_check(1.0 / std::sqrt(2.0), 1.0),
                  IrrationalRatioError);
  CHECK_THROWS_AS(rationality_check(-1.0, 1.0), DomainError);

  try {
    rationality_check(1.0 / std::sqrt(2.0), 1.0);
  } catch (const IrrationalRatioError& e) {
    CHECK(std::string(e.reason()) == "irrational-ratio");
  }
}

TEST_CASE("mode synthesis matches the hand-worked single-mode cases") {
  const RationalRatio ratio = rationality_check(0.25, 1.0);
  const Fn sine = periodic_expr("sin(2*pi*x)", 1.0);
  const CoeffTable fs = fourier_analyze(sine, 1.0, 8);
  const CoeffTable zs = fourier_analyze(zero_fn(1.0), 1.0, 8);

  const FourierSolution a = synth_coeffs(fs, zs, ratio, 0.25);
  CHECK(a.alpha_bar[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(a.beta_bar[1]) <= 1e-10);
  for (int k = 1; k <= 8; ++k) {
    CHECK(std::abs(a.alpha[k]) <= 1e-10);
    CHECK(std::abs(a.beta[k]) <= 1e-10);
    if (k != 1) {
      CHECK(std::abs(a.alpha_bar[k]) <= 1e-10);
      CHECK(std::abs(a.beta_bar[k]) <= 1e-10);
    }
  }

  const FourierSolution b = synth_coeffs(zs, zs, ratio, 0.25);
  CHECK(b.alpha0 == doctest::Approx(0.0).epsilon(1e-12));
  for (int k = 1; k <= 8; ++k) {
    CHECK(std::abs(b.alpha[k]) + std::abs(b.beta[k]) +
              std::abs(b.alpha_bar[k]) + std::abs(b.beta_bar[k]) <=
          1e-12);
  }

  const FourierSolution c = synth_coeffs(zs, fs, ratio, 0.25);
  CHECK(std::abs(c.alpha_bar[1]) <= 1e-10);
  CHECK(c.beta_bar[1] == doctest::Approx(1.0).epsilon(1e-10));

  // Resonant rows keep zero time-sine coefficients by construction.
  CHECK(c.beta[2] == 0.0);
  CHECK(c.beta_bar[2] == 0.0);

  CHECK_THROWS_AS(
      synth_coeffs(fs, fourier_analyze(zero_fn(1.0), 1.0, 4), ratio, 0.25),
      InvariantError);
}

TEST_CASE("solved field reproduces the closed-form standing wave") {
  PeriodicProblem p;
  p.initial = periodic_expr("sin(2*pi*x)", 1.0);
  p.target = zero_fn(1.0);
  p.horizon = 0.25;
  p.length = 1.0;
  const PeriodicSolution sol = solve_periodic(p, 1e-8);

  CHECK(sol.initial_error <= 1e-9);
  CHECK(sol.terminal_error <= 1e-9);
  double worst = 0.0;
  for (const double t : linspace(0.0, 0.25, 11)) {
    for (const double th : linspace(0.0, 1.0, 101)) {
      const double exact = std::cos(2.0 * kPi * t) * std::sin(2.0 * kPi * th);
      worst = std::max(worst, std::abs(sol.field->value(t, th) - exact));
    }
  }
  CHECK(worst <= 1e-9);

  // This solution starts at rest.
  CHECK(max_abs(sol.velocity, linspace(0.0, 1.0, 201)) <= 1e-10);
  CHECK(std::abs(sol.field->dt(0.0, 0.3)) <= 1e-9);

  // Out-of-range times are refused.
  CHECK_THROWS_AS(sol.field->value(-0.01, 0.0), DomainError);
  CHECK_THROWS_AS(sol.field->value(0.26, 0.0), DomainError);
}

TEST_CASE("termwise derivatives of the evaluator are consistent") {
  PeriodicProblem p;
  p.initial = periodic_expr("sin(2*pi*x) + 0.4*cos(6*pi*x)", 1.0);
  p.target = periodic_expr("0.2*cos(2*pi*x)", 1.0);
  p.horizon = 0.25;
  p.length = 1.0;
  const PeriodicSolution sol = solve_periodic(p, 1e-8);
  const Field& y = *sol.field;

  const double h = 1e-4;
  for (const double t : {0.05, 0.12, 0.2}) {
    for (const double x : {0.1, 0.47, 0.8}) {
      const double dt_fd = (y.value(t + h, x) - y.value(t - h, x)) / (2 * h);
      const double dx_fd = (y.value(t, x + h) - y.value(t, x - h)) / (2 * h);
      CHECK(y.dt(t, x) == doctest::Approx(dt_fd).epsilon(1e-5));
      CHECK(y.dx(t, x) == doctest::Approx(dx_fd).epsilon(1e-5));
      const double dtx_fd = (y.dx(t + h, x) - y.dx(t - h, x)) / (2 * h);
      CHECK(y.dtx(t, x) == doctest::Approx(dtx_fd).epsilon(1e-4));
      // Temporal and spatial curvature agree identically mode by mode.
      CHECK(y.dtt(t, x) == y.dxx(t, x));
    }
  }
}

TEST_CASE("initial velocity closes the series at t = 0") {
  FourierSolution drift;
  drift.length = 1.0;
  drift.horizon = 1.0;
  drift.max_mode = 0;
  drift.beta0 = 2.0;
  drift.alpha.assign(1, 0.0);
  drift.beta.assign(1, 0.0);
  drift.alpha_bar.assign(1, 0.0);
  drift.beta_bar.assign(1, 0.0);
  const Fn v0 = initial_velocity(drift);
  CHECK(v0(0.37) == doctest::Approx(1.0).epsilon(1e-14));

  PeriodicProblem p;
  p.initial = zero_fn(1.0);
  p.target = periodic_expr("sin(2*pi*x)", 1.0);
  p.horizon = 0.25;
  p.length = 1.0;
  const PeriodicSolution sol = solve_periodic(p, 1e-8);
  const Fn expect = periodic_expr("2*pi*sin(2*pi*x)", 1.0);
  CHECK(max_abs_diff(sol.velocity, expect, linspace(0.0, 1.0, 201)) <= 1e-9);
  // And the field's own time derivative agrees with the reported velocity.
  for (const double th : linspace(0.0, 1.0, 21)) {
    CHECK(sol.field->dt(0.0, th) ==
          doctest::Approx(sol.velocity(th)).epsilon(1e-10));
  }
}

TEST_CASE("integer ratios: reachable targets pass, others are measured") {
  PeriodicProblem ok;
  ok.initial = periodic_expr("sin(2*pi*x)", 1.0);
  ok.target = ok.initial;
  ok.horizon = 1.0;
  ok.length = 1.0;
  const ObstructionReport pass = resonance_obstruction(ok);
  CHECK(pass.applicable);
  CHECK(pass.residual <= 1e-8);

  PeriodicProblem bad = ok;
  bad.target = periodic_expr("cos(2*pi*x)", 1.0);
  const ObstructionReport fail = resonance_obstruction(bad);
  CHECK(fail.applicable);
  CHECK(fail.residual == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  PeriodicProblem frac = ok;
  frac.horizon = 0.25;
  const ObstructionReport na = resonance_obstruction(frac);
  CHECK_FALSE(na.applicable);
  CHECK(na.residual == 0.0);

  // solve_periodic reports the same residual through the thrown error.
  try {
    solve_periodic(bad, 1e-8);
    CHECK(false);
  } catch (const ResonantRatioError& e) {
    CHECK(std::string(e.reason()) == "resonance-obstruction");
    CHECK(e.obstruction_residual() ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  }
}

TEST_CASE("half-period flip: odd modes must flip sign, even modes persist") {
  // 2T/L = 1 is an integer, so the solver refuses; the reachable terminal
  // profile negates odd modes.
  PeriodicProblem p;
  p.initial = periodic_expr("sin(2*pi*x) + 0.3*cos(4*pi*x)", 1.0);
  p.target = periodic_expr("-sin(2*pi*x) + 0.3*cos(4*pi*x)", 1.0);
  p.horizon = 0.5;
  p.length = 1.0;
  const ObstructionReport r = resonance_obstruction(p);
  CHECK(r.applicable);
  CHECK(r.residual <= 1e-8);

  PeriodicProblem wrong = p;
  wrong.target = p.initial;
  CHECK(resonance_obstruction(wrong).residual ==
        doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("cutoff selection follows the decay of the data") {
  const RationalRatio ratio = rationality_check(0.25, 1.0);

  const CoeffTable fs = fourier_analyze(periodic_expr("sin(2*pi*x)", 1.0), 1.0, 64);
  const CoeffTable zs = fourier_analyze(zero_fn(1.0), 1.0, 64);
  CHECK(choose_cutoff(fs, zs, ratio, 1e-8) == 1);

  // Hand-built tables with k^-4 decay admit a finite cutoff at 1e-8 ...
  CoeffTable smooth;
  smooth.length = 1.0;
  smooth.cos_coef.assign(8193, 0.0);
  smooth.sin_coef.assign(8193, 0.0);
  for (int k = 1; k <= 8192; ++k) {
    smooth.cos_coef[k] = 1.0 / (static_cast<double>(k) * k * k * k);
  }
  CoeffTable none;
  none.length = 1.0;
  none.cos_coef.assign(8193, 0.0);
  none.sin_coef.assign(8193, 0.0);
  const int cut = choose_cutoff(smooth, none, ratio, 1e-8);
  CHECK(cut >= 8);
  CHECK(cut <= 4096);
  // ... and doubling the cutoff moves the reconstruction by less than tol.
  double delta = 0.0;
  for (int k = cut + 1; k <= std::min(2 * cut, 8192); ++k) {
    delta += 2.0 * std::abs(smooth.cos_coef[k]);
  }
  CHECK(delta <= 1e-8);

  // k^-2 decay with a tight tolerance never converges under the cap.
  CoeffTable rough;
  rough.length = 1.0;
  rough.cos_coef.assign(8193, 0.0);
  rough.sin_coef.assign(8193, 0.0);
  for (int k = 1; k <= 8192; ++k) {
    rough.cos_coef[k] = 1.0 / (static_cast<double>(k) * k);
  }
  CHECK_THROWS_AS(choose_cutoff(rough, none, ratio, 1e-8),
                  TailNotConvergedError);
}

TEST_CASE("resonant rows do not influence the two prescribed profiles") {
  const RationalRatio ratio = rationality_check(0.25, 1.0);
  const Fn f = periodic_expr("sin(2*pi*x) + 0.3*cos(4*pi*x)", 1.0);
  const Fn g = periodic_expr("-0.3*cos(4*pi*x) + 0.1*sin(2*pi*x)", 1.0);
  const CoeffTable fc = fourier_analyze(f, 1.0, 16);
  const CoeffTable gc = fourier_analyze(g, 1.0, 16);
  REQUIRE(resonant_mismatch(fc, gc, ratio) <= 1e-12);

  const FourierSolution base = synth_coeffs(fc, gc, ratio, 0.25);
  FourierSolution tweaked = base;
  tweaked.beta[2] = 0.37;
  tweaked.beta_bar[2] = -0.11;

  const PeriodicField y0(base);
  const PeriodicField y1(tweaked);
  double end_diff = 0.0, mid_diff = 0.0;
  for (const double th : linspace(0.0, 1.0, 401)) {
    end_diff = std::max(end_diff,
                        std::abs(y0.value(0.0, th) - y1.value(0.0, th)));
    end_diff = std::max(end_diff,
                        std::abs(y0.value(0.25, th) - y1.value(0.25, th)));
    mid_diff = std::max(mid_diff,
                        std::abs(y0.value(0.1, th) - y1.value(0.1, th)));
  }
  CHECK(end_diff <= 1e-9);
  CHECK(mid_diff > 1e-3);
}

TEST_CASE("non-resonant divisors respect the computed floor") {
  struct Case {
    double horizon;
    long long den;
  };
  for (const Case c : {Case{1.0 / 3.0, 3}, Case{1.0 / 5.0, 5},
                       Case{3.0 / 14.0, 7}}) {
    const RationalRatio r = rationality_check(c.horizon, 1.0);
    REQUIRE(r.den == c.den);
    for (int k = 1; k <= 4096; ++k) {
      const bool resonant = (k % c.den == 0);
      CHECK(r.resonant_mode(k) == resonant);
      const long long red =
          (static_cast<long long>(k) * r.num) % (2 * r.den);
      const double s = std::sin(kPi * static_cast<double>(red) /
                                static_cast<double>(r.den));
      if (resonant) {
        CHECK(std::abs(s) <= 1e-12);
      } else {
        CHECK(std::abs(s) >= r.divisor_bound - 1e-12);
      }
    }
  }
}

TEST_CASE("partially resonant data is rejected with the mismatch attached") {
  PeriodicProblem p;
  p.initial = periodic_expr("sin(2*pi*x)", 1.0);
  p.target = periodic_expr("0.3*cos(4*pi*x)", 1.0);  // resonant mode 2
  p.horizon = 0.25;
  p.length = 1.0;
  try {
    solve_periodic(p, 1e-8);
    CHECK(false);
  } catch (const ResonantRatioError& e) {
    CHECK(std::string(e.reason()) == "resonance-obstruction");
    CHECK(e.obstruction_residual() == doctest::Approx(0.3).epsilon(1e-6));
  }
}

TEST_CASE("irrational horizons are refused by the full pipeline") {
  PeriodicProblem p;
  p.initial = periodic_expr("sin(2*pi*x)", 1.0);
  p.target = zero_fn(1.0);
  p.horizon = 1.0 / std::sqrt(2.0);
  p.length = 1.0;
  CHECK_THROWS_AS(solve_periodic(p, 1e-8), IrrationalRatioError);
}

TEST_CASE("forward marching oracle confirms the synthesized field") {
  PeriodicProblem p;
  p.initial = periodic_expr("1 + 0.5*cos(2*pi*x) - 0.2*sin(4*pi*x)", 1.0);
  p.target = periodic_expr("0.1*cos(2*pi*x) + 0.2*sin(4*pi*x)", 1.0);
  p.horizon = 0.25;
  p.length = 1.0;
  const PeriodicSolution sol = solve_periodic(p, 1e-8);
  CHECK(sol.terminal_error <= 1e-7);

  const FDGrid grid = periodic_grid(1.0, 0.25, 1000, 0.5);
  const FdField oracle = fd_forward(p.initial, sol.velocity, grid);
  const Deviation dev = compare(*sol.field, oracle);
  CHECK(dev.max_abs <= 1e-4);

  ResidualProbe box;
  box.t_lo = 0.06;
  box.t_hi = 0.2;
  box.x_lo = 0.1;
  box.x_hi = 0.9;
  const std::vector<double> steps{0.02, 0.01, 0.005};
  const OrderResult order = residual_order(*sol.field, box, steps);
  CHECK(order.pass());
  CHECK(order.slope >= 1.9);
}

TEST_CASE("unit-circle interface") {
  const double two_pi = 2.0 * kPi;
  const Fn f = periodic_expr("sin(x)", two_pi);
  const Fn g = zero_fn(two_pi);

  const PeriodicSolution sol = solve_circle(f, g, kPi / 2.0, 1e-8);
  double worst = 0.0;
  for (const double t : linspace(0.0, kPi / 2.0, 9)) {
    for (const double th : linspace(0.0, two_pi, 65)) {
      worst = std::max(worst, std::abs(sol.field->value(t, th) -
                                       std::cos(t) * std::sin(th)));
    }
  }
  CHECK(worst <= 1e-9);

  CHECK_THROWS_AS(solve_circle(f, g, kPi, 1e-8), ResonantRatioError);

  const PeriodicSolution still = solve_circle(zero_fn(two_pi), zero_fn(two_pi),
                                              kPi / 2.0, 1e-8);
  CHECK(max_abs(still.velocity, linspace(0.0, two_pi, 101)) <= 1e-12);
  CHECK(std::abs(still.field->value(0.7, 1.3)) <= 1e-12);
}

TEST_CASE("random reachable problems hit both prescribed profiles") {
  std::mt19937_64 rng(20240816);
  std::uniform_real_distribution<double> amp(-0.8, 0.8);
  const RationalRatio ratio = rationality_check(1.0 / 3.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    // Random band-limited data; modes divisible by 3 are resonant, so keep
    // the target consistent there (sign = cos of the reduced angle).
    std::vector<double> fcos(6), fsin(6), gcos(6), gsin(6);
    for (int k = 1; k <= 6; ++k) {
      fcos[k - 1] = amp(rng);
      fsin[k - 1] = amp(rng);
      if (k % 3 == 0) {
        const double sgn = (((k / 3) * ratio.num) % 2 == 0) ? 1.0 : -1.0;
        gcos[k - 1] = sgn * fcos[k - 1];
        gsin[k - 1] = sgn * fsin[k - 1];
      } else {
        gcos[k - 1] = amp(rng);
        gsin[k - 1] = amp(rng);
      }
    }
    PeriodicProblem p;
    p.initial = Fn::trig_series(amp(rng), 1.0, fcos, fsin);
    p.target = Fn::trig_series(amp(rng), 1.0, gcos, gsin);
    p.horizon = 1.0 / 3.0;
    p.length = 1.0;
    const PeriodicSolution sol = solve_periodic(p, 1e-8);
    CHECK(sol.initial_error <= 1e-7);
    CHECK(sol.terminal_error <= 1e-7);
  }
}
