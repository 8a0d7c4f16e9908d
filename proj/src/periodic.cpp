#include "wavectl/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <utility>

#include "wavectl/errors.hpp"

namespace wavectl {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << value;
    throw DomainError(os.str());
  }
}

void check_declared_period(const Fn& fn, double length) {
  if (!fn.period().has_value()) {
    throw DomainError(
        "spatial data must declare its period before spectral analysis");
  }
  const double declared = *fn.period();
  if (std::abs(declared - length) > 1e-9 * (1.0 + std::abs(length))) {
    std::ostringstream os;
    os << "declared period " << declared << " does not match analysis period "
       << length;
    throw DomainError(os.str());
  }
  // Cheap wrap check: the values at the two ends of one period must agree.
  const double a = fn(0.0), b = fn(length);
  const double scale = 1.0 + std::abs(a) + std::abs(b);
  if (std::abs(a - b) > 1e-6 * scale) {
    std::ostringstream os;
    os << "function is not periodic over length " << length << ": f(0)=" << a
       << " but f(length)=" << b;
    throw DomainError(os.str());
  }
}

// Shared body of the analysis twins; `parallel` only toggles the OpenMP
// pragmas, every output element is computed the same way in both paths.
CoeffTable analyze_impl(const Fn& fn, double length, int max_mode,
                        bool parallel) {
  require_positive(length, "period length");
  if (max_mode < 1) throw DomainError("analysis needs max_mode >= 1");
  check_declared_period(fn, length);

  // At least 16 samples per shortest resolved wavelength so no mode through
  // max_mode is aliased; the uniform-grid rule is exact for band-limited
  // input and spectrally accurate for smooth input.
  const int n = std::max(1024, 16 * max_mode);
  const double dx = length / n;

  std::vector<double> values(static_cast<size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
  for (int j = 0; j < n; ++j) {
    values[static_cast<size_t>(j)] = fn(j * dx);
  }

  // One period of cos/sin shared by every mode: mode k at sample j needs the
  // angle 2*pi*(k*j mod n)/n.
  std::vector<double> cos_tab(static_cast<size_t>(n)),
      sin_tab(static_cast<size_t>(n));
  const double step = 2.0 * kPi / n;
#pragma omp parallel for schedule(static) if (parallel)
  for (int j = 0; j < n; ++j) {
    cos_tab[static_cast<size_t>(j)] = std::cos(j * step);
    sin_tab[static_cast<size_t>(j)] = std::sin(j * step);
  }

  CoeffTable table;
  table.length = length;
  table.cos_coef.assign(static_cast<size_t>(max_mode) + 1, 0.0);
  table.sin_coef.assign(static_cast<size_t>(max_mode) + 1, 0.0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k <= max_mode; ++k) {
    double ak = 0.0, bk = 0.0;
    int m = 0;  // (k*j) mod n, advanced incrementally
    for (int j = 0; j < n; ++j) {
      const double v = values[static_cast<size_t>(j)];
      ak += v * cos_tab[static_cast<size_t>(m)];
      bk += v * sin_tab[static_cast<size_t>(m)];
      m += k;
      if (m >= n) m -= n;
    }
    table.cos_coef[static_cast<size_t>(k)] = 2.0 * ak / n;
    table.sin_coef[static_cast<size_t>(k)] = (k == 0) ? 0.0 : 2.0 * bk / n;
  }
  return table;
}

void require_matching_tables(const CoeffTable& fc, const CoeffTable& gc) {
  if (std::abs(fc.length - gc.length) > 1e-12 * (1.0 + std::abs(fc.length))) {
    throw InvariantError("coefficient tables disagree on the period length");
  }
  if (fc.max_mode() != gc.max_mode()) {
    throw InvariantError("coefficient tables disagree on the mode count");
  }
}

// cos/sin of k * (2*pi*T/L) reduced exactly in integer arithmetic:
// k*2T/L = k*num/den, so the angle is pi * ((k*num) mod 2*den) / den.
struct ModeAngle {
  double c = 1.0, s = 0.0;
};

ModeAngle mode_angle(const RationalRatio& ratio, int k) {
  const long long two_den = 2 * ratio.den;
  const long long r = (static_cast<long long>(k) * ratio.num) % two_den;
  const double arg = kPi * static_cast<double>(r) / static_cast<double>(ratio.den);
  ModeAngle a;
  a.c = std::cos(arg);
  a.s = std::sin(arg);
  return a;
}

// Sign of cos(k * 2*pi*T/L) for a resonant mode k (den | k): +1 or -1.
double resonant_sign(const RationalRatio& ratio, int k) {
  const long long flips = (static_cast<long long>(k) / ratio.den) * ratio.num;
  return (flips % 2 == 0) ? 1.0 : -1.0;
}

struct TailSums {
  double plain = 0.0;     // divisor-weighted sum of dropped |coefficients|
  double weighted = 0.0;  // same with k^2 weights (curvature diagnostic)
};

// Majorant of everything beyond cutoff: initial-data coefficients enter the
// synthesized series with weight at most (1 + 1/Cs), target coefficients
// with at most 1/Cs.
TailSums tail_beyond(const CoeffTable& fc, const CoeffTable& gc,
                     const RationalRatio& ratio, int cutoff) {
  const double inv_cs = 1.0 / ratio.divisor_bound;
  TailSums t;
  for (int k = cutoff + 1; k <= fc.max_mode(); ++k) {
    const auto ku = static_cast<size_t>(k);
    const double fmag = std::abs(fc.cos_coef[ku]) + std::abs(fc.sin_coef[ku]);
    const double gmag = std::abs(gc.cos_coef[ku]) + std::abs(gc.sin_coef[ku]);
    const double mag = (1.0 + inv_cs) * fmag + inv_cs * gmag;
    t.plain += mag;
    t.weighted += static_cast<double>(k) * static_cast<double>(k) * mag;
  }
  return t;
}

}  // namespace

CoeffTable fourier_analyze(const Fn& fn, double length, int max_mode) {
  return analyze_impl(fn, length, max_mode, /*parallel=*/true);
}

CoeffTable fourier_analyze_serial(const Fn& fn, double length, int max_mode) {
  return analyze_impl(fn, length, max_mode, /*parallel=*/false);
}

CoeffTable truncate_table(const CoeffTable& table, int max_mode) {
  if (max_mode < 0 || max_mode > table.max_mode()) {
    throw InvariantError("truncation cutoff exceeds the analyzed mode count");
  }
  CoeffTable out;
  out.length = table.length;
  out.cos_coef.assign(table.cos_coef.begin(),
                      table.cos_coef.begin() + max_mode + 1);
  out.sin_coef.assign(table.sin_coef.begin(),
                      table.sin_coef.begin() + max_mode + 1);
  return out;
}

RationalRatio rationality_check(double horizon, double length) {
  require_positive(horizon, "horizon");
  require_positive(length, "period length");
  const double value = 2.0 * horizon / length;

  // Continued-fraction convergents of value; accept the first one within
  // relative 1e-12, refuse once denominators pass 10^6.
  constexpr long long kDenCap = 1000000;
  constexpr double kRelTol = 1e-12;
  long long h_prev = 0, h_curr = 1;  // numerators of convergents
  long long k_prev = 1, k_curr = 0;  // denominators
  double x = value;
  RationalRatio found;
  bool ok = false;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(x);
    if (fl > static_cast<double>(std::numeric_limits<long long>::max() / 4)) {
      break;
    }
    const auto a = static_cast<long long>(fl);
    const long long h_next = a * h_curr + h_prev;
    const long long k_next = a * k_curr + k_prev;
    if (k_next > kDenCap) break;
    h_prev = h_curr;
    h_curr = h_next;
    k_prev = k_curr;
    k_curr = k_next;
    const double approx =
        static_cast<double>(h_curr) / static_cast<double>(k_curr);
    if (std::abs(approx - value) <= kRelTol * value) {
      found.num = h_curr;
      found.den = k_curr;
      ok = true;
      break;
    }
    const double frac = x - fl;
    if (frac <= 0.0) break;
    x = 1.0 / frac;
  }
  if (!ok) {
    std::ostringstream os;
    os << "2*horizon/length = " << value
       << " is not recognizably rational (no fraction with denominator <= "
       << kDenCap << " within relative 1e-12); refusing to solve";
    throw IrrationalRatioError(os.str());
  }
  found.value =
      static_cast<double>(found.num) / static_cast<double>(found.den);
  if (found.den == 1) {
    std::ostringstream os;
    os << "2*horizon/length = " << found.num
       << " is an integer: every mode is resonant and the terminal profile "
          "is constrained by the initial one";
    throw ResonantRatioError(os.str(),
                             std::numeric_limits<double>::quiet_NaN());
  }
  found.divisor_bound = std::sin(kPi / static_cast<double>(found.den));
  return found;
}

FourierSolution synth_coeffs(const CoeffTable& fc, const CoeffTable& gc,
                             const RationalRatio& ratio, double horizon) {
  require_matching_tables(fc, gc);
  require_positive(horizon, "horizon");

  const int max_mode = fc.max_mode();
  FourierSolution sol;
  sol.length = fc.length;
  sol.horizon = horizon;
  sol.ratio = ratio;
  sol.max_mode = max_mode;
  sol.alpha0 = fc.cos_coef[0];
  sol.beta0 = (gc.cos_coef[0] - fc.cos_coef[0]) / horizon;
  sol.alpha.assign(static_cast<size_t>(max_mode) + 1, 0.0);
  sol.beta.assign(static_cast<size_t>(max_mode) + 1, 0.0);
  sol.alpha_bar.assign(static_cast<size_t>(max_mode) + 1, 0.0);
  sol.beta_bar.assign(static_cast<size_t>(max_mode) + 1, 0.0);

  for (int k = 1; k <= max_mode; ++k) {
    const auto ku = static_cast<size_t>(k);
    sol.alpha[ku] = fc.cos_coef[ku];
    sol.alpha_bar[ku] = fc.sin_coef[ku];
    if (ratio.resonant_mode(k)) {
      // Vanishing divisor: keep the canonical zero time-sine coefficients.
      continue;
    }
    const ModeAngle a = mode_angle(ratio, k);
    sol.beta[ku] = (gc.cos_coef[ku] - fc.cos_coef[ku] * a.c) / a.s;
    sol.beta_bar[ku] = (gc.sin_coef[ku] - fc.sin_coef[ku] * a.c) / a.s;
  }
  return sol;
}

double resonant_mismatch(const CoeffTable& fc, const CoeffTable& gc,
                         const RationalRatio& ratio) {
  require_matching_tables(fc, gc);
  double worst = 0.0;
  for (int k = static_cast<int>(ratio.den); k <= fc.max_mode();
       k += static_cast<int>(ratio.den)) {
    const auto ku = static_cast<size_t>(k);
    const double sgn = resonant_sign(ratio, k);
    worst = std::max(worst,
                     std::abs(gc.cos_coef[ku] - sgn * fc.cos_coef[ku]));
    worst = std::max(worst,
                     std::abs(gc.sin_coef[ku] - sgn * fc.sin_coef[ku]));
  }
  return worst;
}

PeriodicField::PeriodicField(FourierSolution sol) : sol_(std::move(sol)) {
  const size_t want = static_cast<size_t>(sol_.max_mode) + 1;
  if (sol_.alpha.size() != want || sol_.beta.size() != want ||
      sol_.alpha_bar.size() != want || sol_.beta_bar.size() != want) {
    throw InvariantError("mode vectors disagree with the declared cutoff");
  }
  require_positive(sol_.length, "period length");
  require_positive(sol_.horizon, "horizon");
}

void PeriodicField::check_time(double t) const {
  const double slack = 1e-9 * (1.0 + sol_.horizon);
  if (t < -slack || t > sol_.horizon + slack) {
    std::ostringstream os;
    os << "time " << t << " outside [0, " << sol_.horizon << "]";
    throw DomainError(os.str());
  }
}

namespace {

// a*cos(w k t) + b*sin(w k t); a time derivative maps (a, b) -> w k (b, -a).
struct Pair {
  double a = 0.0, b = 0.0;
};

}  // namespace

// Termwise derivative of the series: dt_order time and dx_order space
// derivatives applied to every mode, then summed. Mode angles come from
// incremental rotations refreshed from std::cos/std::sin every 64 modes so
// rounding cannot accumulate across large cutoffs.
double PeriodicField::series_sum(double t, double x, int dt_order,
                                 int dx_order) const {
  const double wt = 2.0 * kPi * t / sol_.length;
  const double wx = 2.0 * kPi * x / sol_.length;
  const double cdt = std::cos(wt), sdt = std::sin(wt);
  const double cdx = std::cos(wx), sdx = std::sin(wx);
  const double base_w = 2.0 * kPi / sol_.length;

  double ct = 1.0, st = 0.0;  // cos/sin of k*wt
  double cx = 1.0, sx = 0.0;  // cos/sin of k*wx
  double total = 0.0;
  for (int k = 1; k <= sol_.max_mode; ++k) {
    if (k % 64 == 0) {
      ct = std::cos(k * wt);
      st = std::sin(k * wt);
      cx = std::cos(k * wx);
      sx = std::sin(k * wx);
    } else {
      const double ct_new = ct * cdt - st * sdt;
      st = st * cdt + ct * sdt;
      ct = ct_new;
      const double cx_new = cx * cdx - sx * sdx;
      sx = sx * cdx + cx * sdx;
      cx = cx_new;
    }
    const auto ku = static_cast<size_t>(k);
    const double w = base_w * k;
    Pair pa{sol_.alpha[ku], sol_.beta[ku]};        // pairs with cos(k wx x)
    Pair pb{sol_.alpha_bar[ku], sol_.beta_bar[ku]};  // pairs with sin
    for (int d = 0; d < dt_order; ++d) {
      pa = Pair{w * pa.b, -w * pa.a};
      pb = Pair{w * pb.b, -w * pb.a};
    }
    for (int d = 0; d < dx_order; ++d) {
      const Pair pa_old = pa;
      pa = Pair{w * pb.a, w * pb.b};
      pb = Pair{-w * pa_old.a, -w * pa_old.b};
    }
    total += (pa.a * ct + pa.b * st) * cx + (pb.a * ct + pb.b * st) * sx;
  }
  return total;
}

double PeriodicField::value(double t, double x) const {
  check_time(t);
  return 0.5 * (sol_.alpha0 + sol_.beta0 * t) + series_sum(t, x, 0, 0);
}

double PeriodicField::dt(double t, double x) const {
  check_time(t);
  return 0.5 * sol_.beta0 + series_sum(t, x, 1, 0);
}

double PeriodicField::dx(double t, double x) const {
  check_time(t);
  return series_sum(t, x, 0, 1);
}

double PeriodicField::dtt(double t, double x) const {
  check_time(t);
  return series_sum(t, x, 2, 0);
}

double PeriodicField::dxx(double t, double x) const {
  check_time(t);
  // Every mode satisfies a_k'' = -(w k)^2 a_k, so the spatial curvature sum
  // is the temporal one; sharing the call keeps the two bit-identical.
  return series_sum(t, x, 2, 0);
}

double PeriodicField::dtx(double t, double x) const {
  check_time(t);
  return series_sum(t, x, 1, 1);
}

Fn initial_velocity(const FourierSolution& sol) {
  const double base_w = 2.0 * kPi / sol.length;
  std::vector<double> cos_amp(static_cast<size_t>(sol.max_mode), 0.0);
  std::vector<double> sin_amp(static_cast<size_t>(sol.max_mode), 0.0);
  for (int k = 1; k <= sol.max_mode; ++k) {
    cos_amp[static_cast<size_t>(k - 1)] = base_w * k * sol.beta[static_cast<size_t>(k)];
    sin_amp[static_cast<size_t>(k - 1)] =
        base_w * k * sol.beta_bar[static_cast<size_t>(k)];
  }
  return Fn::trig_series(0.5 * sol.beta0, sol.length, std::move(cos_amp),
                         std::move(sin_amp));
}

ObstructionReport resonance_obstruction(const PeriodicProblem& p,
                                        int max_mode, int probes) {
  require_positive(p.horizon, "horizon");
  require_positive(p.length, "period length");
  ObstructionReport report;
  const double value = 2.0 * p.horizon / p.length;
  const double rounded = std::round(value);
  if (rounded < 1.0 || std::abs(value - rounded) > 1e-9 * (1.0 + value)) {
    return report;  // not an integer ratio: nothing to obstruct
  }
  report.applicable = true;
  const auto m = static_cast<long long>(rounded);

  const CoeffTable fc = fourier_analyze(p.initial, p.length, max_mode);
  const CoeffTable gc = fourier_analyze(p.target, p.length, max_mode);

  // With an integer ratio every mode returns to +-itself at the horizon:
  // the reachable terminal profiles are the target's mean plus the initial
  // oscillation with mode k scaled by (-1)^(k m).
  const std::vector<double> grid = linspace(0.0, p.length, probes);
  double worst = 0.0;
  for (const double theta : grid) {
    double reach = 0.5 * gc.cos_coef[0];
    for (int k = 1; k <= max_mode; ++k) {
      const auto ku = static_cast<size_t>(k);
      const double sgn = ((static_cast<long long>(k) * m) % 2 == 0) ? 1.0 : -1.0;
      const double arg = 2.0 * kPi * k * theta / p.length;
      reach += sgn * (fc.cos_coef[ku] * std::cos(arg) +
                      fc.sin_coef[ku] * std::sin(arg));
    }
    worst = std::max(worst, std::abs(p.target(theta) - reach));
  }
  report.residual = worst;
  return report;
}

int choose_cutoff(const CoeffTable& fc, const CoeffTable& gc,
                  const RationalRatio& ratio, double tol) {
  require_matching_tables(fc, gc);
  require_positive(tol, "tolerance");
  const int cap = std::min(4096, fc.max_mode() / 2);

  // Suffix sums of the divisor-weighted majorant, then the smallest cutoff
  // whose dropped tail fits under tol.
  const double inv_cs = 1.0 / ratio.divisor_bound;
  std::vector<double> suffix(static_cast<size_t>(fc.max_mode()) + 2, 0.0);
  for (int k = fc.max_mode(); k >= 1; --k) {
    const auto ku = static_cast<size_t>(k);
    const double fmag = std::abs(fc.cos_coef[ku]) + std::abs(fc.sin_coef[ku]);
    const double gmag = std::abs(gc.cos_coef[ku]) + std::abs(gc.sin_coef[ku]);
    suffix[ku] = suffix[ku + 1] + (1.0 + inv_cs) * fmag + inv_cs * gmag;
  }
  for (int k = 1; k <= cap; ++k) {
    if (suffix[static_cast<size_t>(k) + 1] <= tol) return k;
  }
  std::ostringstream os;
  os << "no cutoff up to " << cap << " brings the spectral tail under " << tol
     << " (tail at the cap: " << suffix[static_cast<size_t>(cap) + 1] << ")";
  throw TailNotConvergedError(os.str());
}

PeriodicSolution solve_periodic(const PeriodicProblem& p, double tol) {
  require_positive(p.horizon, "horizon");
  require_positive(p.length, "period length");
  require_positive(tol, "tolerance");

  RationalRatio ratio;
  try {
    ratio = rationality_check(p.horizon, p.length);
  } catch (const ResonantRatioError& err) {
    // Integer ratio: attach the distance of the target from the reachable
    // terminal set so callers can report how badly the data is obstructed.
    const ObstructionReport report = resonance_obstruction(p, 1024);
    throw ResonantRatioError(err.what(), report.residual);
  }

  const double bound = std::max(tol, 1e-7);
  const std::vector<double> probe = linspace(0.0, p.length, 2001);
  double best_terminal = std::numeric_limits<double>::infinity();
  double best_initial = std::numeric_limits<double>::infinity();
  double prev_octave = -1.0;

  for (int table_modes = 64; table_modes <= 8192; table_modes *= 2) {
    const CoeffTable fc = fourier_analyze(p.initial, p.length, table_modes);
    const CoeffTable gc = fourier_analyze(p.target, p.length, table_modes);

    // Modes with vanishing divisors can only reach +-their initial value at
    // the horizon; a target that disagrees there is obstructed, not
    // under-resolved.
    const double mismatch = resonant_mismatch(fc, gc, ratio);
    if (mismatch > 0.5 * bound) {
      std::ostringstream os;
      os << "target is unreachable: modes with index divisible by "
         << ratio.den << " are resonant for 2*horizon/length = " << ratio.num
         << "/" << ratio.den
         << " and the target deviates from the reachable value by "
         << mismatch;
      throw ResonantRatioError(os.str(), mismatch);
    }

    int cutoff = 0;
    try {
      cutoff = choose_cutoff(fc, gc, ratio, tol);
    } catch (const TailNotConvergedError&) {
      // Bail out early when growing the table stops shrinking its top
      // octave: the coefficients are not decaying and no table will do.
      double octave = 0.0;
      for (int k = table_modes / 2 + 1; k <= table_modes; ++k) {
        const auto ku = static_cast<size_t>(k);
        octave += std::abs(fc.cos_coef[ku]) + std::abs(fc.sin_coef[ku]) +
                  std::abs(gc.cos_coef[ku]) + std::abs(gc.sin_coef[ku]);
      }
      if (prev_octave >= 0.0 && octave > 0.9 * prev_octave) throw;
      prev_octave = octave;
      if (table_modes == 8192) throw;
      continue;
    }

    FourierSolution modes = synth_coeffs(truncate_table(fc, cutoff),
                                         truncate_table(gc, cutoff), ratio,
                                         p.horizon);
    const TailSums tail = tail_beyond(fc, gc, ratio, cutoff);
    modes.tail_bound = tail.plain;
    modes.tail_weighted = tail.weighted;

    auto field = std::make_shared<const PeriodicField>(modes);
    double initial_err = 0.0, terminal_err = 0.0;
    for (const double theta : probe) {
      initial_err = std::max(initial_err,
                             std::abs(field->value(0.0, theta) - p.initial(theta)));
      terminal_err = std::max(
          terminal_err, std::abs(field->value(p.horizon, theta) - p.target(theta)));
    }
    best_initial = std::min(best_initial, initial_err);
    best_terminal = std::min(best_terminal, terminal_err);
    if (initial_err <= bound && terminal_err <= bound) {
      PeriodicSolution out;
      out.modes = std::move(modes);
      out.velocity = initial_velocity(out.modes);
      out.field = std::move(field);
      out.initial_error = initial_err;
      out.terminal_error = terminal_err;
      return out;
    }
  }

  std::ostringstream os;
  os << "prescribed profiles not reproduced within " << bound
     << " at any table size (best initial error " << best_initial
     << ", best terminal error " << best_terminal << ")";
  throw TailNotConvergedError(os.str());
}

PeriodicSolution solve_circle(const Fn& initial, const Fn& target,
                              double horizon, double tol) {
  PeriodicProblem p;
  p.initial = initial;
  p.target = target;
  p.horizon = horizon;
  p.length = 2.0 * kPi;
  return solve_periodic(p, tol);
}

}  // namespace wavectl
