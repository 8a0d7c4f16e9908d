#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"
#include "wavectl/periodic.hpp"

namespace wavectl {

// Curvature-level control of a closed plane curve: prescribe the curvature
// profile at time zero and require the constant profile kstar at time
// horizon, with the curvature evolving as a space-periodic wave.
struct FlowProblem {
  Fn initial;            // curvature at t = 0, periodic with period length
  double length = 1.0;   // arclength parameter interval [0, length]
  double horizon = 1.0;  // time of the prescribed constant profile
  double kstar = 1.0;    // constant curvature demanded at the horizon
};

// The returned evolution is the raw periodic solve plus a linear-in-time
// shift that restores nonnegativity whenever the initial velocity dips
// below zero; the shift raises the terminal constant from kstar to k0.
struct FlowSolution {
  FlowProblem problem;
  PeriodicSolution spectral;               // raw solve with target kstar
  std::shared_ptr<const Field> curvature;  // shifted evolution
  Fn velocity;                 // time derivative of the raw solve at t = 0
  double min_velocity = 0.0;   // global minimum of velocity over one period
  double shift_rate = 0.0;     // max(0, -min_velocity)
  double k0 = 0.0;             // kstar + shift_rate * horizon
  double min_curvature = 0.0;  // smallest sampled value of the evolution
  double terminal_error = 0.0; // max |curvature(horizon, s) - k0| sampled
};

// Solves the two-point problem for the curvature wave and applies the
// nonnegativity shift. Throws DomainError for malformed sizes,
// AdmissibilityError("negative-curvature") when the initial profile dips
// below zero, and passes through the ratio errors of the periodic solver.
FlowSolution solve_flow(const FlowProblem& problem, double tol = 1e-8);

// Closed polyline recovered from a curvature profile: the tangent angle is
// the running integral of the curvature from 0 (starting angle 0), and the
// position integrates the unit tangent from the origin. The endpoints need
// not meet; the gap and the total-turning defect are reported, not raised.
struct CurvePolyline {
  std::vector<double> x, y;   // n + 1 vertices; ideally last == first
  double closure_gap = 0.0;   // distance between final and first vertex
  double angle_defect = 0.0;  // |total turning - 2 pi|
};

CurvePolyline reconstruct_curve(const std::function<double(double)>& curvature,
                                double length, int n);

// One rendered time slice of a flow.
struct FrameRecord {
  double time = 0.0;
  std::string file;  // SVG name relative to the output directory
  double closure_gap = 0.0;
  double angle_defect = 0.0;
  double min_curvature = 0.0;  // min over the slice's sample grid
};

struct FrameSet {
  std::string directory;
  std::vector<FrameRecord> frames;
};

// Reconstructs the curve at `frames` uniformly spaced times in
// [0, horizon], writes numbered SVG files plus manifest.json into the
// directory (created if absent), and returns the records. Throws
// InvariantError for frames < 2 and DomainError when the directory or any
// file cannot be written.
FrameSet emit_frames(const FlowSolution& sol, int frames,
                     const std::string& directory);

}  // namespace wavectl
