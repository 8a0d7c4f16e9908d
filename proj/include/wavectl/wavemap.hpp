#pragma once

#include <memory>

#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/line1d.hpp"

namespace wavectl {

// Two-point problem for y_tt - y_xx = y_t^2 - y_x^2 on the whole line:
// prescribe y(0,x) = initial and y(horizon,x) = target. Solved through the
// substitution z = e^{-y}, which turns the equation into the linear wave
// equation; a positive z gives back y = -ln z.
struct WaveMapProblem {
  Fn initial;  // f
  Fn target;   // g
  double horizon = 1.0;
};

// Separation of the two profiles, evaluated on a 4001-point grid over
// [-5(horizon+1), 5(horizon+1)]: the construction needs
// inf initial > sup target so the substituted data stays ordered.
struct OrderingCheck {
  double inf_initial = 0.0;
  double arg_inf = 0.0;  // grid point attaining the infimum
  double sup_target = 0.0;
  double arg_sup = 0.0;

  bool ok() const { return inf_initial > sup_target; }
  double margin() const { return inf_initial - sup_target; }
};

OrderingCheck check_ordering(const WaveMapProblem& p);

// Substituted linear problem with data e^{-initial}, e^{-target}.
// Throws OrderingViolatedError (with the witness points) when the profiles
// are not strictly ordered.
LineProblem to_linear(const WaveMapProblem& p);

// Report of the slope-sum criterion that keeps the synthesized velocity
// nonnegative. For x in the N-th band ((2N-1)T, (2N+1)T) the velocity adds
// twice the N-th partial slope sum to a nonnegative germ, so the scan
// checks, band by band up to max_bucket, that the matching partial sum has
// the right sign: >= -1e-9 right of T, <= 1e-9 left of -T. Two sufficient
// shapes are recognized and reported alongside: a slope that is nonnegative
// right of zero and nonpositive left of it, and a slope that is nonnegative
// on [0, 2T] and antiperiodic with period 2T.
struct NonnegReport {
  bool grid_pass = false;
  double worst = 0.0;  // largest wrong-signed bucket sum (0 when none)
  double worst_x = 0.0;
  int worst_bucket = 0;
  bool monotone_pattern = false;
  bool alternating_pattern = false;

  bool pass() const { return grid_pass; }
};

NonnegReport check_nonneg_condition(const Fn& reduced, double horizon,
                                    int max_bucket = 8);

// Nonnegative velocity germ on [-halfwidth, halfwidth] with the same three
// germ moments as the reduced target: the quadratic germ when it is already
// nonnegative, otherwise the quadratic plus lam*((1-(x/T)^2)^2 - 8/15) with
// lam found by a bounded deterministic search (the bump keeps all three
// moments unchanged). Throws NoNonnegativeSeedError when the germ moments
// force a sign change the family cannot absorb.
SeedFunction build_nonneg_seed(const ReducedTarget& rt, double halfwidth);

struct WaveMapSolution {
  ControlSolution linear;  // the solve for z
  std::shared_ptr<const Field> field;  // y(t,x) = -ln z(t,x)
  Fn velocity;                         // y_t(0, .)
  OrderingCheck ordering;
  NonnegReport nonneg;
  double min_z = 0.0;  // positivity margin of z on the probe grid
  double initial_error = 0.0;   // worst |y(0,x) - initial(x)| on the grid
  double terminal_error = 0.0;  // worst |y(horizon,x) - target(x)|
};

// Full pipeline: ordering check, substitution, reduced-target positivity,
// slope-sum criterion, nonnegative germ, linear solve, positivity probe,
// logarithmic unwrap. Throws OrderingViolatedError, NonnegConditionError,
// NoNonnegativeSeedError, or PositivityLostError (the last one never when
// the checks before it pass).
WaveMapSolution solve_wavemap(const WaveMapProblem& p);

}  // namespace wavectl
