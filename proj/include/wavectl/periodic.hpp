#pragma once

#include <memory>
#include <vector>

#include "wavectl/field.hpp"
#include "wavectl/fn.hpp"

namespace wavectl {

// Prescribed profiles at t=0 and t=horizon for a solution that is
// length-periodic in space. Both functions must declare the period.
struct PeriodicProblem {
  Fn initial;  // f
  Fn target;   // g
  double horizon = 1.0;
  double length = 1.0;
};

// Trigonometric coefficients of one length-periodic function:
// fn(x) ~ cos_coef[0]/2 + sum_k cos_coef[k] cos(2k pi x/L)
//                       + sin_coef[k] sin(2k pi x/L),
// cos_coef[k] = (2/L) * integral of fn * cos(2k pi x/L) over one period,
// sin_coef[k] likewise (sin_coef[0] stays 0).
struct CoeffTable {
  double length = 1.0;
  std::vector<double> cos_coef, sin_coef;
  int max_mode() const { return static_cast<int>(cos_coef.size()) - 1; }
};

// Coefficients through max_mode by uniform periodic sampling (exact for
// band-limited input, spectrally accurate for smooth input). The sample
// count scales with max_mode so no resolved mode is aliased. fourier_analyze
// computes modes in parallel; fourier_analyze_serial is its bit-identical
// single-thread twin.
CoeffTable fourier_analyze(const Fn& fn, double length, int max_mode);
CoeffTable fourier_analyze_serial(const Fn& fn, double length, int max_mode);

// First max_mode rows of a larger table.
CoeffTable truncate_table(const CoeffTable& table, int max_mode);

// 2*horizon/length recognized as an exact fraction num/den in lowest terms.
struct RationalRatio {
  long long num = 0;
  long long den = 1;           // positive; gcd(|num|, den) == 1
  double value = 0.0;          // num/den
  double divisor_bound = 0.0;  // sin(pi/den), the small-divisor floor
  // Modes whose index is a multiple of den have a vanishing divisor.
  bool resonant_mode(int k) const { return k % den == 0; }
};

// Reconstructs 2T/L as a fraction via continued fractions (denominator cap
// 10^6, relative tolerance 1e-12). Throws IrrationalRatioError when no
// convergent qualifies and ResonantRatioError when the ratio is an integer
// (den == 1), in which case the terminal profile is constrained by the
// initial one rather than free.
RationalRatio rationality_check(double horizon, double length);

// Separated-variables solution: mode k evolves as
//   a_k(t) = alpha[k] cos(w_k t) + beta[k] sin(w_k t),    w_k = 2k pi / L,
// paired with cos(w_k x) in space; alpha_bar/beta_bar pair with sin(w_k x);
// the zero mode is (alpha0 + beta0 t)/2.
struct FourierSolution {
  double length = 1.0, horizon = 1.0;
  RationalRatio ratio;
  int max_mode = 0;
  double alpha0 = 0.0, beta0 = 0.0;
  std::vector<double> alpha, beta, alpha_bar, beta_bar;  // index 0 unused
  double tail_bound = 0.0;     // divisor-weighted majorant of the cut tail
  double tail_weighted = 0.0;  // k^2-weighted tail (derivative diagnostic)
};

// Mode-by-mode interpolation of both prescribed profiles. Tables must share
// length and mode count. Resonant modes (vanishing divisor) keep the
// canonical zero time-sine coefficients; their terminal values are then
// determined by the initial data alone, see resonant_mismatch.
FourierSolution synth_coeffs(const CoeffTable& fc, const CoeffTable& gc,
                             const RationalRatio& ratio, double horizon);

// How far the target's resonant modes sit from the only values the
// synthesis can reach there: max over resonant k <= K of the coefficient
// deviation. Zero when no mode k <= K is resonant.
double resonant_mismatch(const CoeffTable& fc, const CoeffTable& gc,
                         const RationalRatio& ratio);

// Evaluator for the synthesized series; derivatives are termwise.
class PeriodicField : public Field {
 public:
  explicit PeriodicField(FourierSolution sol);

  double value(double t, double x) const override;
  double dt(double t, double x) const override;
  double dx(double t, double x) const override;
  double dtt(double t, double x) const override;
  double dxx(double t, double x) const override;
  double dtx(double t, double x) const override;

  const FourierSolution& modes() const { return sol_; }

 private:
  void check_time(double t) const;
  double series_sum(double t, double x, int dt_order, int dx_order) const;
  FourierSolution sol_;
};

// v(x) = y_t(0, x) as a closed trigonometric sum with declared period.
Fn initial_velocity(const FourierSolution& sol);

struct ObstructionReport {
  bool applicable = false;  // 2T/L is an integer
  double residual = 0.0;    // grid max |target - reachable terminal profile|
};

// When 2T/L = m is an integer every mode is resonant and the reachable
// terminal profiles are mean(g) plus the initial profile with mode k scaled
// by (-1)^{km}. Reports the grid max-norm distance of the target from that
// set; not applicable (residual 0) otherwise.
ObstructionReport resonance_obstruction(const PeriodicProblem& p,
                                        int max_mode = 1024,
                                        int probes = 2001);

// Smallest cutoff K whose dropped tail, weighted by the small-divisor bound
// ((1 + 1/Cs) for the initial data, 1/Cs for the target), stays within tol.
// Only cutoffs up to half the table (and at most 4096) are trusted; throws
// TailNotConvergedError when none qualifies.
int choose_cutoff(const CoeffTable& fc, const CoeffTable& gc,
                  const RationalRatio& ratio, double tol);

struct PeriodicSolution {
  FourierSolution modes;
  Fn velocity;
  std::shared_ptr<const PeriodicField> field;
  double initial_error = 0.0;   // probe-grid max |y(0,.) - f|
  double terminal_error = 0.0;  // probe-grid max |y(T,.) - g|
};

// Full pipeline: admissibility, analysis at increasing table sizes, cutoff
// selection, synthesis, and a probe-grid check of both prescribed profiles.
// Throws IrrationalRatioError / ResonantRatioError (obstruction residual
// attached) / TailNotConvergedError; DomainError for malformed data.
PeriodicSolution solve_periodic(const PeriodicProblem& p, double tol = 1e-8);

// Unit-circle specialization: period 2*pi.
PeriodicSolution solve_circle(const Fn& initial, const Fn& target,
                              double horizon, double tol = 1e-8);

}  // namespace wavectl
