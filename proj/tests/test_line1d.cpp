#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wavectl/errors.hpp"
#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/line1d.hpp"

using namespace wavectl;

namespace {

LineProblem smooth_problem() {
  return LineProblem{Fn::parse("sin(1.3*x)*exp(-x^2/8)"),
                     Fn::parse("cos(0.7*x)*exp(-x^2/10)"), 1.0, 1.0};
}

}  // namespace

TEST_CASE("reduced target carries the right jet at the origin") {
  LineProblem p{Fn::parse("sin(x)"), Fn::parse("cos(x)"), 1.0, 1.0};
  ReducedTarget rt = reduce_target(p);
  // g(x) - (f(x-1)+f(x+1))/2 = cos(x) - sin(x)*cos(1)
  CHECK(rt.profile(0.7) ==
        doctest::Approx(std::cos(0.7) - std::sin(0.7) * std::cos(1.0))
            .epsilon(1e-13));
  CHECK(rt.value0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rt.slope0 == doctest::Approx(-std::cos(1.0)).epsilon(1e-12));
  CHECK(rt.curv0 == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("both germ families satisfy the three conditions") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.3, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    double T = width(rng);
    ReducedTarget rt;
    rt.profile = Fn::constant(0.0);  // unused by the constructions
    rt.value0 = coef(rng);
    rt.slope0 = coef(rng);
    rt.curv0 = coef(rng);

    SeedFunction sp = seed_polynomial(rt, T);
    SeedCheck cp = check_seed(sp, rt);
    CHECK(cp.pass(1e-9));

    SeedFunction st = seed_trig(rt, T);
    SeedCheck ct = check_seed(st, rt);
    CHECK(ct.pass(1e-9));
  }
}

TEST_CASE("user-supplied germ goes through the same gate") {
  LineProblem p = smooth_problem();
  ReducedTarget rt = reduce_target(p);
  SeedFunction base = seed_polynomial(rt, 1.0);

  // Adding a zero-mean wave with matching endpoints and slopes keeps all
  // three conditions intact.
  SeedFunction user{base.fn + Fn::parse("0.4*sin(2*pi*x)"), 1.0,
                    SeedKind::kUser};
  CHECK(check_seed(user, rt).pass(1e-7));

  LineSolveOptions opt;
  opt.user_seed = user;
  ControlSolution sol = solve_line(p, opt);
  for (double x : {-2.0, -0.5, 0.0, 1.1, 3.0})
    CHECK(sol.field->value(1.0, x) ==
          doctest::Approx(p.target(x)).epsilon(1e-9));

  // A germ violating the endpoint-difference condition is rejected.
  SeedFunction bad{base.fn + Fn::parse("x^3"), 1.0, SeedKind::kUser};
  LineSolveOptions opt_bad;
  opt_bad.user_seed = bad;
  CHECK_THROWS_AS(solve_line(p, opt_bad), InvariantError);
}

TEST_CASE("straight-line target has the identity velocity") {
  LineProblem p{Fn::constant(0.0), Fn::parse("x"), 1.0, 1.0};
  LineSolveOptions opt;
  opt.seed = SeedKind::kPolynomial;
  ControlSolution sol = solve_line(p, opt);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pick(-8.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    double x = pick(rng);
    CHECK(std::fabs(sol.velocity(x) - x) <= 1e-10);
  }
  // Exactly on the first few seams as well.
  for (double s : {1.0, 3.0, 5.0, -1.0, -3.0, -5.0})
    CHECK(std::fabs(sol.velocity(s) - s) <= 1e-10);
}

TEST_CASE("solution interpolates both prescribed profiles") {
  LineProblem p = smooth_problem();
  for (SeedKind kind : {SeedKind::kPolynomial, SeedKind::kTrigonometric}) {
    LineSolveOptions opt;
    opt.seed = kind;
    ControlSolution sol = solve_line(p, opt);
    for (int i = 0; i <= 100; ++i) {
      double x = -5.0 + 0.1 * i;
      CHECK(std::fabs(sol.field->value(0.0, x) - p.initial(x)) <= 1e-12);
      CHECK(std::fabs(sol.field->value(1.0, x) - p.target(x)) <= 1e-9);
      CHECK(std::fabs(sol.field->dt(0.0, x) - sol.velocity(x)) <= 1e-12);
    }
  }
}

TEST_CASE("velocity is continuous across the seams") {
  LineProblem p = smooth_problem();
  ControlSolution sol = solve_line(p);
  double delta = 1e-9;
  for (int n = 1; n <= 4; ++n) {
    for (double sgn : {1.0, -1.0}) {
      double s = sgn * (2.0 * n - 1.0);
      double jump = std::fabs(sol.velocity(s + delta) - sol.velocity(s - delta));
      CHECK(jump <= 1e-7);
      double dl = sol.velocity.deriv_side(s, 1, /*from_left=*/true);
      double dr = sol.velocity.deriv_side(s, 1, /*from_left=*/false);
      CHECK(std::fabs(dl - dr) <= 1e-7);
    }
  }
}

TEST_CASE("null velocities change the path but not the endpoints") {
  LineProblem p = smooth_problem();
  ControlSolution sol = solve_line(p);
  NullVelocity null_v{Fn::parse("sin(pi*x)").with_period(2.0), 1.0};
  ControlSolution sol2 = add_null_velocity(sol, null_v);

  bool interior_changed = false;
  for (int i = 0; i <= 40; ++i) {
    double x = -4.0 + 0.2 * i;
    CHECK(std::fabs(sol2.field->value(0.0, x) - p.initial(x)) <= 1e-12);
    CHECK(std::fabs(sol2.field->value(1.0, x) - p.target(x)) <= 1e-8);
    if (std::fabs(sol2.field->value(0.5, x) - sol.field->value(0.5, x)) > 1e-4)
      interior_changed = true;
  }
  CHECK(interior_changed);
  CHECK(std::fabs(sol2.velocity(0.5) - sol.velocity(0.5) - 1.0) <= 1e-9);

  // Must declare the right period and have zero mean.
  CHECK_THROWS_AS(add_null_velocity(sol, NullVelocity{Fn::parse("sin(pi*x)"), 1.0}),
                  InvariantError);
  CHECK_THROWS_AS(
      add_null_velocity(
          sol, NullVelocity{Fn::parse("1 + sin(pi*x)").with_period(2.0), 1.0}),
      InvariantError);
  CHECK_THROWS_AS(
      add_null_velocity(
          sol, NullVelocity{Fn::parse("sin(pi*x)").with_period(2.0), 0.8}),
      InvariantError);
}

TEST_CASE("velocity solves the half-integral equation") {
  LineProblem p = smooth_problem();
  ControlSolution sol = solve_line(p);
  auto grid = linspace(-4.0, 4.0, 81);
  CHECK(volterra_residual(sol, grid) <= 1e-9);
}

TEST_CASE("characteristic parallelogram identity") {
  LineProblem p = smooth_problem();
  ControlSolution sol = solve_line(p);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> tt(0.0, 1.0), xx(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    double t1 = tt(rng), t2 = tt(rng);
    if (t1 > t2) std::swap(t1, t2);
    CHECK(quadrilateral_residual(*sol.field, t1, t2, xx(rng)) <= 1e-9);
  }
  CHECK(quadrilateral_residual(*sol.field, 0.4, 0.4, 1.0) == 0.0);
}

TEST_CASE("propagation speed scales space, not time") {
  LineProblem p{Fn::constant(0.0), Fn::parse("x"), 1.0, 2.0};
  ControlSolution sol = solve_line(p);
  // v(x) = x and y(t,x) = t*x for this data at any speed.
  CHECK(sol.velocity(0.7) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(sol.field->value(0.5, 1.2) == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(sol.field->dt(0.0, 1.5) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(sol.field->value(1.0, -2.0) == doctest::Approx(-2.0).epsilon(1e-9));

  // Smooth data: terminal profile still matched.
  LineProblem q = smooth_problem();
  q.speed = 0.5;
  ControlSolution sq = solve_line(q);
  for (double x : {-2.0, -0.3, 0.9, 2.4})
    CHECK(sq.field->value(1.0, x) == doctest::Approx(q.target(x)).epsilon(1e-8));
}

TEST_CASE("vector problems solve componentwise") {
  std::vector<LineProblem> comps{smooth_problem(),
                                 LineProblem{Fn::parse("exp(-x^2)"),
                                             Fn::parse("exp(-(x-1)^2)"), 1.0,
                                             1.0}};
  auto sols = solve_vector_line(comps);
  REQUIRE(sols.size() == 2);
  ControlSolution lone = solve_line(comps[1]);
  for (double x : {-1.0, 0.2, 2.0})
    CHECK(sols[1].velocity(x) == doctest::Approx(lone.velocity(x)).epsilon(1e-12));

  comps[1].horizon = 2.0;
  CHECK_THROWS_AS(solve_vector_line(comps), InvariantError);
}

TEST_CASE("field guards its time interval and derivatives are consistent") {
  ControlSolution sol = solve_line(smooth_problem());
  CHECK_THROWS_AS(sol.field->value(-0.5, 0.0), DomainError);
  CHECK_THROWS_AS(sol.field->value(1.5, 0.0), DomainError);

  // dtt equals dxx (unit speed) by construction; check against finite
  // differences of the field itself.
  double t = 0.37, x = 0.81, h = 1e-4;
  const LineSolution& y = *sol.field;
  double dtt_fd =
      (y.value(t + h, x) - 2.0 * y.value(t, x) + y.value(t - h, x)) / (h * h);
  CHECK(y.dtt(t, x) == doctest::Approx(dtt_fd).epsilon(1e-5));
  double dtx_fd = (y.value(t + h, x + h) - y.value(t + h, x - h) -
                   y.value(t - h, x + h) + y.value(t - h, x - h)) /
                  (4.0 * h * h);
  CHECK(y.dtx(t, x) == doctest::Approx(dtx_fd).epsilon(1e-5));
  CHECK(y.dtt(t, x) == doctest::Approx(y.dxx(t, x)).epsilon(1e-12));
}

TEST_CASE("direct d'Alembert evaluation agrees with the solution field") {
  LineProblem p = smooth_problem();
  ControlSolution sol = solve_line(p);
  for (double t : {0.2, 0.8})
    for (double x : {-1.5, 0.4})
      CHECK(dalembert_eval(p.initial, sol.velocity, t, x) ==
            doctest::Approx(sol.field->value(t, x)).epsilon(1e-10));
}
