#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/periodic.hpp"
#include "wavectl/verify.hpp"

namespace wavectl {

// Endpoint condition imposed at x = 0 and x = length.
enum class BoundaryKind { kDirichlet, kNeumann };

// Two-point problem on a finite interval [0, length]: prescribe the profile
// at t = 0 and t = horizon, find an initial velocity whose evolution connects
// them while honouring the endpoint condition. When the traces are absent the
// endpoint data is homogeneous (zero value for Dirichlet, zero slope for
// Neumann); otherwise `left_trace`/`right_trace` give the imposed endpoint
// value (Dirichlet) or endpoint slope (Neumann) as functions of time on
// [0, horizon].
struct BoundedProblem {
  Fn initial;  // profile at t = 0, defined on [0, length]
  Fn target;   // profile at t = horizon, defined on [0, length]
  double horizon = 1.0;
  double length = 1.0;
  BoundaryKind kind = BoundaryKind::kDirichlet;
  std::optional<Fn> left_trace;   // data at x = 0, defined on [0, horizon]
  std::optional<Fn> right_trace;  // data at x = length

  bool homogeneous() const { return !left_trace && !right_trace; }
};

// Endpoint-matching residuals that the data must satisfy for the
// construction to go through. Every entry uses tolerance 1e-6.
struct CompatReport {
  std::vector<CheckResult> checks;

  bool pass() const;
  double worst() const;  // largest residual value
};

CompatReport check_compat(const BoundedProblem& p);

// Reflection extensions of a profile given on [0, length] to a periodic
// function of period 2*length. The odd extension requires the profile to
// vanish at both endpoints (within 1e-6) and throws CompatibilityError
// otherwise; the even extension is unconditional.
Fn extend_odd(const Fn& fn, double length);
Fn extend_even(const Fn& fn, double length);

// Polynomial of degree 2m+1 matching the jets (value, first, ..., m-th
// derivative) at t0 and t1, where m+1 is the common span length. Used to
// join boundary data segments with prescribed smoothness.
Fn hermite_bridge(double t0, std::span<const double> jet0, double t1,
                  std::span<const double> jet1);

// Boundary trace extended from [0, horizon] to a larger interval so that the
// two-endpoint traces combine into a single function P with
// P(t + length) + P(t - length) = 2 * right(t) on [0, horizon].
struct ExtendedBoundary {
  Fn fn;             // the extension P
  double lo = 0.0;   // domain [lo, hi]
  double hi = 0.0;
  std::vector<CheckResult> junctions;  // smoothness at the gluing points
  double functional_residual = 0.0;    // worst two-endpoint identity error
};

// Dirichlet extension: C^3 gluing, domain [-horizon-length, horizon+length].
// Requires horizon < length.
ExtendedBoundary extend_boundary_dirichlet(const Fn& left, const Fn& right,
                                           double horizon, double length);

// Neumann extension: C^2 gluing, domain [-length, horizon+length].
// Requires horizon < length.
ExtendedBoundary extend_boundary_neumann(const Fn& left, const Fn& right,
                                         double horizon, double length);

// Subtract the boundary contribution so the remaining problem has
// homogeneous endpoint data of the same kind. Throws CompatibilityError if
// the lifted data fails its endpoint conditions.
BoundedProblem lift_dirichlet(const BoundedProblem& p,
                              const ExtendedBoundary& ext);
BoundedProblem lift_neumann(const BoundedProblem& p,
                            const ExtendedBoundary& ext);

struct BoundedSolution {
  PeriodicSolution spectral;  // solve of the reflected periodic problem
  std::shared_ptr<const Field> field;  // solution on [0,horizon]x[0,length]
  Fn velocity;                         // recovered initial velocity
  std::vector<CheckResult> compat;     // endpoint residuals of the input
  std::optional<ExtendedBoundary> boundary_extension;  // inhomogeneous only
  double initial_error = 0.0;   // worst |y(0,x) - initial(x)|
  double terminal_error = 0.0;  // worst |y(horizon,x) - target(x)|
  double left_trace_error = 0.0;   // worst endpoint residual at x = 0
  double right_trace_error = 0.0;  // worst endpoint residual at x = length
  bool transposed = false;  // solved with the axes exchanged (horizon > length)
};

// Homogeneous endpoint data: reflect (odd for Dirichlet, even for Neumann)
// to a periodic problem of period 2*length and solve spectrally.
BoundedSolution solve_homogeneous(const BoundedProblem& p, double tol = 1e-8);

// Inhomogeneous endpoint data: extend the traces, subtract their
// contribution, solve the homogeneous remainder, and add the contribution
// back. Dirichlet with horizon > length is handled by exchanging the roles
// of time and space; Neumann requires horizon < length outright.
BoundedSolution solve_inhomogeneous(const BoundedProblem& p,
                                    double tol = 1e-8);

// Dispatch on whether traces are present.
BoundedSolution solve_bounded(const BoundedProblem& p, double tol = 1e-8);

}  // namespace wavectl
