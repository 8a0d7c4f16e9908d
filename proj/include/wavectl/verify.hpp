#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/quadrature.hpp"

namespace wavectl {

// How the ends of the spatial grid are treated by the time stepper.
//   kPeriodic    — index wraps; node x1 is identified with x0.
//   kOddReflect  — ghost values mirror with a sign flip (zero end values,
//                  or imposed end values when traces are supplied).
//   kEvenReflect — ghost values mirror (zero end slopes, or imposed end
//                  slopes when traces are supplied).
//   kEnlarged    — the grid spans a domain grown far enough that whatever
//                  the ends do never reaches the window of interest; end
//                  nodes are frozen at their initial values.
enum class Boundary { kPeriodic, kOddReflect, kEvenReflect, kEnlarged };

// How the first time slice is produced.
//   kTaylor          — f + dt v + (c dt)^2/2 f'' (second-order start).
//   kCharacteristic  — exact solution at t = dt: averaged shifts of the
//                      initial profile plus the integrated velocity. At unit
//                      Courant number the shifts land on grid nodes and the
//                      whole scheme becomes exact up to rounding.
//   kAuto            — kCharacteristic at unit Courant number, else kTaylor.
enum class FirstStep { kAuto, kTaylor, kCharacteristic };

// Uniform space-time lattice for the explicit second-order stepper.
struct FDGrid {
  double x0 = 0.0, x1 = 1.0;    // spatial span actually stepped
  double wx0 = 0.0, wx1 = 1.0;  // window of interest (== span unless enlarged)
  int nx = 256;                 // spatial cells; nodes = nx or nx+1
  int nt = 256;                 // time steps
  double horizon = 1.0;
  double speed = 1.0;
  Boundary boundary = Boundary::kPeriodic;

  double dx() const { return (x1 - x0) / nx; }
  double dt() const { return horizon / nt; }
  // Courant number; stability requires <= 1.
  double lambda() const { return speed * dt() / dx(); }
  int nodes() const { return boundary == Boundary::kPeriodic ? nx : nx + 1; }
  double x(int i) const { return x0 + i * dx(); }
  double t(int n) const { return n * dt(); }
};

// Throws DomainError when the grid is unusable (Courant number above 1,
// fewer than 16 cells or steps, empty span, window outside the span).
void validate_grid(const FDGrid& g);

FDGrid periodic_grid(double length, double horizon, int nx,
                     double lambda = 0.5, double speed = 1.0);
// odd=true for zero end values, odd=false for zero end slopes.
FDGrid bounded_grid(double length, double horizon, int nx, bool odd,
                    double lambda = 0.5, double speed = 1.0);
// Window [a, b] stepped at unit Courant number on a domain enlarged by
// speed*horizon + pad on each side so edge effects never reach the window.
// nx is the nominal cell count across the window itself.
FDGrid line_grid(double a, double b, double horizon, int nx,
                 double speed = 1.0, double pad = 2.0);

struct FdOptions {
  FirstStep first_step = FirstStep::kAuto;
  // Keep every stride-th time slice (slices 0, 1 and nt are always kept).
  int store_stride = 1;
  // Imposed end values (odd-reflection grids) or end slopes (even-reflection
  // grids) as functions of time; absent means homogeneous.
  std::optional<Fn> left_trace, right_trace;
  Quadrature quad;  // velocity integrals for the characteristic first step
};

// Time-stepped solution: stored slices plus the energy of every step pair.
class FdField {
 public:
  FdField(FDGrid grid, int store_stride);

  const FDGrid& grid() const { return grid_; }
  int slice_count() const { return static_cast<int>(steps_.size()); }
  // Time index n of stored slice k.
  int slice_step(int k) const { return steps_[k]; }
  double slice_time(int k) const { return grid_.t(steps_[k]); }
  std::span<const double> slice(int k) const { return slices_[k]; }
  double at(int k, int i) const { return slices_[k][i]; }
  // Index of the stored terminal slice (time index nt).
  int terminal_slice() const { return slice_count() - 1; }

  // E_n for n = 0..nt-1: kinetic + cross-difference energy of the slice pair
  // (n, n+1); exactly conserved by the stepper on periodic grids.
  std::span<const double> energies() const { return energies_; }
  double energy_drift() const;  // max |E_n - E_0| / max |E_0|

  // Used by the stepper only.
  void record(int n, std::span<const double> y);
  void record_energy(double e) { energies_.push_back(e); }
  bool wants(int n) const;

 private:
  FDGrid grid_;
  int stride_;
  std::vector<int> steps_;
  std::vector<std::vector<double>> slices_;
  std::vector<double> energies_;
};

// Kinetic + cross-difference energy of a consecutive slice pair.
double discrete_energy(const FDGrid& g, std::span<const double> a,
                       std::span<const double> b);

// Explicit second-order time stepper for y_tt = c^2 y_xx from initial
// profile and initial velocity. fd_forward parallelizes the spatial update;
// fd_forward_serial is its bit-identical single-thread twin.
FdField fd_forward(const Fn& initial, const Fn& velocity, const FDGrid& grid,
                   const FdOptions& opt = {});
FdField fd_forward_serial(const Fn& initial, const Fn& velocity,
                          const FDGrid& grid, const FdOptions& opt = {});

struct Deviation {
  double max_abs = 0.0;       // over all stored slices in the window
  double rms = 0.0;           // root mean square over the same points
  double terminal_max = 0.0;  // over the final slice only
  double worst_t = 0.0, worst_x = 0.0;
};

// Evaluate the field at every stored grid point inside the window and
// measure the deviation from the stepped values.
Deviation compare(const Field& approx, const FdField& oracle);

// Which equation the residual probes test:
//   kLinear        y_tt - c^2 y_xx = 0
//   kExpNonlinear  y_tt - c^2 y_xx = y_t^2 - c^2 y_x^2
enum class PdeForm { kLinear, kExpNonlinear };

struct ResidualProbe {
  double t_lo = 0.25, t_hi = 0.75;  // keep t +- step/2 inside [0, horizon]
  double x_lo = -1.0, x_hi = 1.0;   // keep x +- step inside the domain
  int nt = 5, nx = 9;               // probe lattice
};

struct OrderResult {
  std::vector<double> step;      // probe steps, halving
  std::vector<double> residual;  // max |residual| per step
  double slope = 0.0;            // least-squares log residual vs log step
  bool exact = false;            // residuals at the rounding floor
  double scale = 1.0;            // max(1, max |y|) over the probes
  bool pass(double min_slope = 1.9) const {
    return exact || slope >= min_slope;
  }
};

// Centered-difference equation residual of the evaluator on a probe box,
// scanned over a halving step sequence (>= 3 values). The time step runs at
// half the space step on purpose: with equal steps the discrete wave
// operator is exact on every traveling-wave field, so all truncation cancels
// and nothing is measured. A field whose residuals sit at the rounding floor
// is reported exact instead of sloped.
OrderResult residual_order(const Field& y, const ResidualProbe& box,
                           std::span<const double> steps,
                           PdeForm form = PdeForm::kLinear, double speed = 1.0);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline CheckResult make_check(std::string name, double value,
                              double tolerance) {
  bool ok = value <= tolerance;
  return CheckResult{std::move(name), value, tolerance, ok};
}

// Aggregated verification report for one solve.
struct Diagnostics {
  double terminal_max_error = 0.0;
  double residual_norm = 0.0;
  double residual_slope = 0.0;
  bool residual_exact = false;
  double seam_jump = 0.0;
  double oracle_max_deviation = 0.0;
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

}  // namespace wavectl
