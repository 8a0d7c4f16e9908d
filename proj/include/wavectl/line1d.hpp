#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/quadrature.hpp"

namespace wavectl {

// Prescribe the solution profile at t=0 (initial) and t=horizon (target) on
// the whole line; the solver produces the initial velocity that connects
// them. speed scales the propagation speed of the underlying equation.
struct LineProblem {
  Fn initial;   // f
  Fn target;    // g
  double horizon = 1.0;
  double speed = 1.0;
};

// g(x) - (f(x-T) + f(x+T))/2 together with its value/slope/curvature at 0,
// the three numbers the seed construction needs.
struct ReducedTarget {
  Fn profile;
  double value0 = 0.0;
  double slope0 = 0.0;
  double curv0 = 0.0;
};

enum class SeedKind { kPolynomial, kTrigonometric, kUser };

// Velocity germ on [-T, T]. Everything outside is generated by the
// propagation identities, so the seed plus the reduced target determine the
// velocity everywhere.
struct SeedFunction {
  Fn fn;
  double halfwidth = 1.0;  // T
  SeedKind kind = SeedKind::kPolynomial;
};

// Residuals of the three germ conditions: the integral over [-T,T], the
// endpoint difference, and the one-sided-slope difference.
struct SeedCheck {
  double integral_residual = 0.0;
  double jump_residual = 0.0;
  double corner_residual = 0.0;
  bool pass(double tol = 1e-8) const {
    return integral_residual <= tol && jump_residual <= tol &&
           corner_residual <= tol;
  }
};

// A perturbation that leaves both prescribed profiles untouched: declared
// period 2T and zero mean over one period.
struct NullVelocity {
  Fn fn;
  double halfwidth = 1.0;
};

struct LineSolveOptions {
  Quadrature quad;
  // Seed choice; a user germ (validated against the reduced target) wins
  // over the kind selector when present.
  SeedKind seed = SeedKind::kPolynomial;
  std::optional<SeedFunction> user_seed;
  // Cumulative-integral table for the evaluator. halfspan 0 means
  // 5*(T+1) + T + 1; cells_per_unit 0 disables the table (every evaluation
  // integrates directly — used where solutions are built in bulk and queried
  // only a few times).
  double table_halfspan = 0.0;
  int table_cells_per_unit = 1024;
};

class LineSolution;

struct ControlSolution {
  Fn velocity;                              // initial velocity, exact composite
  std::shared_ptr<const LineSolution> field;  // (t,x) evaluator
  LineProblem problem;                      // original data (original speed)
  ReducedTarget reduced;
  SeedFunction seed;
};

// d'Alembert evaluator: the average of the two shifted initial profiles plus
// half the velocity integral over the dependence interval, with the spatial
// rescale folded in when speed != 1. Derivatives are exact in terms of
// f', f'', v, v'. `initial` and `velocity` are the unit-speed profiles.
class LineSolution : public Field {
 public:
  LineSolution(Fn initial, Fn velocity, double horizon, double speed,
               const LineSolveOptions& opt);

  double value(double t, double x) const override;
  double dt(double t, double x) const override;
  double dx(double t, double x) const override;
  double dtt(double t, double x) const override;
  double dxx(double t, double x) const override;
  double dtx(double t, double x) const override;

  // (value with the initial-profile average removed) = half the velocity
  // integral; satisfies the characteristic parallelogram identity exactly.
  double reduced_value(double t, double x) const;

  double horizon() const { return horizon_; }
  double speed() const { return speed_; }
  // unit-speed velocity profile
  const Fn& velocity() const { return v_; }
  // integral of the unit-speed velocity
  double velocity_integral(double a, double b) const;

 private:
  void check_time(double t) const;

  Fn f_, v_;
  double horizon_, speed_;
  Quadrature quad_;
  std::shared_ptr<const Antiderivative> table_;
};

// Rescale to unit speed: data become x -> f(c x), x -> g(c x); results map
// back through x -> x/c.
LineProblem normalize_speed(const LineProblem& p);

// Requires unit speed.
ReducedTarget reduce_target(const LineProblem& p);

SeedFunction seed_polynomial(const ReducedTarget& rt, double halfwidth);
SeedFunction seed_trig(const ReducedTarget& rt, double halfwidth);

// Residuals of the germ conditions, via quadrature and (for user-supplied
// seeds) one-sided stencils.
SeedCheck check_seed(const SeedFunction& seed, const ReducedTarget& rt,
                     const Quadrature& quad = {});

// Extend the germ to the whole line. The result is continuous with
// continuous first derivative across the seams at odd multiples of T
// whenever the germ conditions hold.
Fn synth_velocity(const SeedFunction& seed, const ReducedTarget& rt);

// One-off d'Alembert evaluation by direct quadrature (unit speed).
double dalembert_eval(const Fn& initial, const Fn& velocity, double t,
                      double x, const Quadrature& quad = {});

ControlSolution solve_line(const LineProblem& p,
                           const LineSolveOptions& opt = {});

// Same horizon and speed, independent profiles per component.
std::vector<ControlSolution> solve_vector_line(
    std::span<const LineProblem> components, const LineSolveOptions& opt = {});

// Adds a mean-free 2T-periodic perturbation to the velocity; both prescribed
// profiles are unchanged. Throws InvariantError when the perturbation's
// declared period or mean is off.
ControlSolution add_null_velocity(const ControlSolution& sol,
                                  const NullVelocity& null_v,
                                  const LineSolveOptions& opt = {});

// max over grid of |(1/2)*integral of v over [x-T, x+T] - profile(x)|.
// The 1/2 factor keeps the check consistent with the evaluator's dependence
// integral.
double volterra_residual(const ControlSolution& sol,
                         std::span<const double> grid);

// Characteristic parallelogram residual for the reduced field. Vertices are
// (t1,x), (t2,x) and the two side points ((t1+t2)/2, x -/+ (t2-t1)/2);
// degenerate when t1 == t2.
double quadrilateral_residual(const LineSolution& sol, double t1, double t2,
                              double x);

}  // namespace wavectl
