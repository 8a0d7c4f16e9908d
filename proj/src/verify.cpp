#include "wavectl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavectl/errors.hpp"

namespace wavectl {

void validate_grid(const FDGrid& g) {
  if (!(g.x1 > g.x0)) throw DomainError("grid span is empty");
  if (!(g.horizon > 0.0)) throw DomainError("horizon must be positive");
  if (!(g.speed > 0.0)) throw DomainError("speed must be positive");
  if (g.nx < 16 || g.nt < 16)
    throw DomainError("grid needs at least 16 cells and 16 steps");
  if (g.lambda() > 1.0 + 1e-12)
    throw DomainError("Courant condition violated: speed*dt/dx = " +
                      std::to_string(g.lambda()) + " exceeds 1");
  double tol = 1e-9 * (g.x1 - g.x0);
  if (g.wx0 < g.x0 - tol || g.wx1 > g.x1 + tol || g.wx1 < g.wx0 - tol)
    throw DomainError("window of interest must lie inside the grid span");
}

FDGrid periodic_grid(double length, double horizon, int nx, double lambda,
                     double speed) {
  if (!(lambda > 0.0) || lambda > 1.0)
    throw DomainError("Courant target must lie in (0, 1]");
  FDGrid g;
  g.x0 = 0.0;
  g.x1 = length;
  g.wx0 = 0.0;
  g.wx1 = length;
  g.nx = std::max(nx, 16);
  g.horizon = horizon;
  g.speed = speed;
  g.boundary = Boundary::kPeriodic;
  double dt_target = lambda * g.dx() / speed;
  g.nt = std::max(16, static_cast<int>(std::ceil(horizon / dt_target - 1e-9)));
  validate_grid(g);
  return g;
}

FDGrid bounded_grid(double length, double horizon, int nx, bool odd,
                    double lambda, double speed) {
  FDGrid g = periodic_grid(length, horizon, nx, lambda, speed);
  g.boundary = odd ? Boundary::kOddReflect : Boundary::kEvenReflect;
  return g;
}

FDGrid line_grid(double a, double b, double horizon, int nx, double speed,
                 double pad) {
  if (!(b > a)) throw DomainError("window of interest is empty");
  if (!(pad >= 0.0)) throw DomainError("pad must be nonnegative");
  double dx_nominal = (b - a) / std::max(nx, 16);
  int nt = std::max(
      16, static_cast<int>(std::ceil(speed * horizon / dx_nominal - 1e-9)));
  double dt = horizon / nt;
  double dx = speed * dt;  // unit Courant number
  double reach = speed * horizon + pad;
  double x0 = a - reach;
  int cells = static_cast<int>(std::ceil((b + reach - x0) / dx - 1e-9));
  FDGrid g;
  g.x0 = x0;
  g.x1 = x0 + cells * dx;
  g.wx0 = a;
  g.wx1 = b;
  g.nx = cells;
  g.nt = nt;
  g.horizon = horizon;
  g.speed = speed;
  g.boundary = Boundary::kEnlarged;
  validate_grid(g);
  return g;
}

FdField::FdField(FDGrid grid, int store_stride)
    : grid_(grid), stride_(std::max(1, store_stride)) {}

bool FdField::wants(int n) const {
  return n % stride_ == 0 || n == 1 || n == grid_.nt;
}

void FdField::record(int n, std::span<const double> y) {
  steps_.push_back(n);
  slices_.emplace_back(y.begin(), y.end());
}

double FdField::energy_drift() const {
  if (energies_.empty()) return 0.0;
  double e0 = energies_.front();
  double den = std::max(std::fabs(e0), 1e-300);
  double worst = 0.0;
  for (double e : energies_) worst = std::max(worst, std::fabs(e - e0));
  return worst / den;
}

double discrete_energy(const FDGrid& g, std::span<const double> a,
                       std::span<const double> b) {
  const int n = g.nodes();
  const double dt = g.dt(), dx = g.dx(), c2 = g.speed * g.speed;
  double kin = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = (b[i] - a[i]) / dt;
    kin += d * d;
  }
  int pairs = g.boundary == Boundary::kPeriodic ? n : n - 1;
  double pot = 0.0;
  for (int i = 0; i < pairs; ++i) {
    int ip = i + 1 == n ? 0 : i + 1;
    pot += (a[ip] - a[i]) * (b[ip] - b[i]);
  }
  return 0.5 * dx * kin + 0.5 * c2 * pot / dx;
}

namespace {

// Data reflected across the span ends so it can be evaluated one stencil
// width outside [x0, x1].
Fn extended_view(const Fn& f, const FDGrid& g, bool odd) {
  double length = g.x1 - g.x0;
  if (g.x0 == 0.0) return reflect_extend(f, length, odd);
  return shift_arg(reflect_extend(shift_arg(f, g.x0), length, odd), -g.x0);
}

FdField fd_forward_impl(const Fn& f, const Fn& v, const FDGrid& g,
                        const FdOptions& opt, bool par) {
  validate_grid(g);
  const int n = g.nodes();
  const int nt = g.nt;
  const double dt = g.dt();
  const double dx = g.dx();
  const double c = g.speed;
  const double lam = g.lambda();
  const double lam2 = lam * lam;
  const bool periodic = g.boundary == Boundary::kPeriodic;

  FirstStep mode = opt.first_step;
  if (mode == FirstStep::kAuto)
    mode = std::fabs(lam - 1.0) <= 1e-9 ? FirstStep::kCharacteristic
                                        : FirstStep::kTaylor;

  std::vector<double> ym(n), yc(n), yn(n);

#pragma omp parallel for if (par)
  for (int i = 0; i < n; ++i) ym[i] = f(g.x(i));

  if (mode == FirstStep::kTaylor) {
    const double half_cdt2 = 0.5 * (c * dt) * (c * dt);
#pragma omp parallel for if (par)
    for (int i = 0; i < n; ++i) {
      double xi = g.x(i);
      yc[i] = ym[i] + dt * v(xi) + half_cdt2 * f.deriv(xi, 2);
    }
  } else {
    Fn fe = f, ve = v;
    if (g.boundary == Boundary::kOddReflect ||
        g.boundary == Boundary::kEvenReflect) {
      bool odd = g.boundary == Boundary::kOddReflect;
      fe = extended_view(f, g, odd);
      ve = extended_view(v, g, odd);
    }
    const double r = c * dt;
#pragma omp parallel for if (par)
    for (int i = 0; i < n; ++i) {
      double xi = g.x(i);
      yc[i] = 0.5 * (fe(xi - r) + fe(xi + r)) +
              opt.quad.integrate(ve, xi - r, xi + r) / (2.0 * c);
    }
  }
  if (g.boundary == Boundary::kOddReflect) {
    yc[0] = opt.left_trace ? (*opt.left_trace)(dt) : 0.0;
    yc[n - 1] = opt.right_trace ? (*opt.right_trace)(dt) : 0.0;
  } else if (g.boundary == Boundary::kEnlarged) {
    yc[0] = ym[0];
    yc[n - 1] = ym[n - 1];
  }

  FdField out(g, opt.store_stride);
  out.record(0, ym);
  if (out.wants(1)) out.record(1, yc);
  out.record_energy(discrete_energy(g, ym, yc));

  for (int step = 1; step < nt; ++step) {
    if (periodic) {
#pragma omp parallel for if (par)
      for (int i = 0; i < n; ++i) {
        int ip = i + 1 == n ? 0 : i + 1;
        int im = i == 0 ? n - 1 : i - 1;
        yn[i] = 2.0 * yc[i] - ym[i] + lam2 * (yc[ip] - 2.0 * yc[i] + yc[im]);
      }
    } else {
#pragma omp parallel for if (par)
      for (int i = 1; i < n - 1; ++i)
        yn[i] =
            2.0 * yc[i] - ym[i] + lam2 * (yc[i + 1] - 2.0 * yc[i] + yc[i - 1]);
      switch (g.boundary) {
        case Boundary::kOddReflect: {
          double tn = g.t(step + 1);
          yn[0] = opt.left_trace ? (*opt.left_trace)(tn) : 0.0;
          yn[n - 1] = opt.right_trace ? (*opt.right_trace)(tn) : 0.0;
          break;
        }
        case Boundary::kEvenReflect: {
          double tc = g.t(step);
          double gl = opt.left_trace ? (*opt.left_trace)(tc) : 0.0;
          double gr = opt.right_trace ? (*opt.right_trace)(tc) : 0.0;
          yn[0] = 2.0 * yc[0] - ym[0] +
                  lam2 * (2.0 * yc[1] - 2.0 * yc[0] - 2.0 * dx * gl);
          yn[n - 1] = 2.0 * yc[n - 1] - ym[n - 1] +
                      lam2 * (2.0 * yc[n - 2] - 2.0 * yc[n - 1] + 2.0 * dx * gr);
          break;
        }
        case Boundary::kEnlarged:
          yn[0] = yc[0];
          yn[n - 1] = yc[n - 1];
          break;
        default:
          break;
      }
    }
    if (out.wants(step + 1)) out.record(step + 1, yn);
    out.record_energy(discrete_energy(g, yc, yn));
    std::swap(ym, yc);
    std::swap(yc, yn);
  }
  return out;
}

}  // namespace

FdField fd_forward(const Fn& initial, const Fn& velocity, const FDGrid& grid,
                   const FdOptions& opt) {
  return fd_forward_impl(initial, velocity, grid, opt, true);
}

FdField fd_forward_serial(const Fn& initial, const Fn& velocity,
                          const FDGrid& grid, const FdOptions& opt) {
  return fd_forward_impl(initial, velocity, grid, opt, false);
}

Deviation compare(const Field& approx, const FdField& oracle) {
  const FDGrid& g = oracle.grid();
  const double tol = 1e-9 * (g.wx1 - g.wx0 + 1.0);
  Deviation d;
  double sum2 = 0.0;
  long count = 0;
  for (int k = 0; k < oracle.slice_count(); ++k) {
    double t = oracle.slice_time(k);
    auto row = oracle.slice(k);
    bool terminal = oracle.slice_step(k) == g.nt;
    for (int i = 0; i < g.nodes(); ++i) {
      double xi = g.x(i);
      if (xi < g.wx0 - tol || xi > g.wx1 + tol) continue;
      double dev = std::fabs(approx.value(t, xi) - row[i]);
      sum2 += dev * dev;
      ++count;
      if (dev > d.max_abs) {
        d.max_abs = dev;
        d.worst_t = t;
        d.worst_x = xi;
      }
      if (terminal) d.terminal_max = std::max(d.terminal_max, dev);
    }
  }
  if (count > 0) d.rms = std::sqrt(sum2 / count);
  return d;
}

OrderResult residual_order(const Field& y, const ResidualProbe& box,
                           std::span<const double> steps, PdeForm form,
                           double speed) {
  if (steps.size() < 3)
    throw InvariantError("residual scan needs at least 3 probe steps");
  for (size_t j = 1; j < steps.size(); ++j) {
    double ratio = steps[j] / steps[j - 1];
    if (!(ratio > 0.4 && ratio < 0.6))
      throw InvariantError("probe steps must decrease by about half");
  }
  auto ts = linspace(box.t_lo, box.t_hi, box.nt);
  auto xs = linspace(box.x_lo, box.x_hi, box.nx);
  const double c2 = speed * speed;

  OrderResult out;
  double scale = 1.0;
  for (double t : ts)
    for (double x : xs) scale = std::max(scale, std::fabs(y.value(t, x)));
  out.scale = scale;

  for (double h : steps) {
    // Unequal steps on purpose; see the declaration comment.
    const double ht = 0.5 * h, hx = h;
    double worst = 0.0;
    for (double t : ts) {
      for (double x : xs) {
        double y0 = y.value(t, x);
        double ytp = y.value(t + ht, x), ytm = y.value(t - ht, x);
        double yxp = y.value(t, x + hx), yxm = y.value(t, x - hx);
        double dtt = (ytp - 2.0 * y0 + ytm) / (ht * ht);
        double dxx = (yxp - 2.0 * y0 + yxm) / (hx * hx);
        double r = dtt - c2 * dxx;
        if (form == PdeForm::kExpNonlinear) {
          double dt1 = (ytp - ytm) / (2.0 * ht);
          double dx1 = (yxp - yxm) / (2.0 * hx);
          r -= dt1 * dt1 - c2 * dx1 * dx1;
        }
        worst = std::max(worst, std::fabs(r));
      }
    }
    out.step.push_back(h);
    out.residual.push_back(worst);
  }

  double rmax = *std::max_element(out.residual.begin(), out.residual.end());
  if (rmax <= 1e-9 * scale) {
    out.exact = true;
    out.slope = 0.0;
    return out;
  }
  // Least-squares slope of log residual against log step.
  size_t m = out.step.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t j = 0; j < m; ++j) {
    double lx = std::log(out.step[j]);
    double ly = std::log(std::max(out.residual[j], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace wavectl
