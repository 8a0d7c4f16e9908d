#include "wavectl/curvflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wavectl/errors.hpp"
#include "wavectl/io.hpp"

namespace wavectl {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive, got " << v;
    throw DomainError(os.str());
  }
}

struct MinSample {
  double value = 0.0;
  double arg = 0.0;
};

// Global minimum of a smooth periodic function: dense scan over one period,
// then golden-section descent inside the best two-cell bracket.
MinSample min_on_period(const Fn& fn, double period) {
  constexpr int kSamples = 8192;
  const double h = period / kSamples;
  MinSample best{fn(0.0), 0.0};
  for (int i = 1; i < kSamples; ++i) {
    const double x = i * h;
    const double v = fn(x);
    if (v < best.value) best = {v, x};
  }
  double a = best.arg - h;
  double b = best.arg + h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + period); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  for (double x : {0.5 * (a + b), c, d}) {
    const double v = fn(x);
    if (v < best.value) best = {v, x};
  }
  return best;
}

// Raw evolution plus rate * t; the rate is zero when no lift is needed so
// both branches share one computation path.
class ShiftedField final : public Field {
 public:
  ShiftedField(std::shared_ptr<const Field> base, double rate)
      : base_(std::move(base)), rate_(rate) {}

  double value(double t, double x) const override {
    return base_->value(t, x) + rate_ * t;
  }
  double dt(double t, double x) const override {
    return base_->dt(t, x) + rate_;
  }
  double dx(double t, double x) const override { return base_->dx(t, x); }
  double dtt(double t, double x) const override { return base_->dtt(t, x); }
  double dxx(double t, double x) const override { return base_->dxx(t, x); }
  double dtx(double t, double x) const override { return base_->dtx(t, x); }

 private:
  std::shared_ptr<const Field> base_;
  double rate_;
};

}  // namespace

FlowSolution solve_flow(const FlowProblem& problem, double tol) {
  require_positive(problem.length, "curve length");
  require_positive(problem.horizon, "horizon");
  require_positive(problem.kstar, "terminal curvature");

  // The initial profile must not dip below zero anywhere on one period.
  {
    constexpr int kProbes = 4097;
    double worst = std::numeric_limits<double>::infinity();
    double worst_s = 0.0;
    double scale = 0.0;
    for (int i = 0; i < kProbes; ++i) {
      const double s = problem.length * i / (kProbes - 1);
      const double v = problem.initial(s);
      scale = std::max(scale, std::abs(v));
      if (v < worst) {
        worst = v;
        worst_s = s;
      }
    }
    if (worst < -1e-9 * (1.0 + scale)) {
      std::ostringstream os;
      os << "initial curvature dips to " << worst << " at s = " << worst_s;
      throw AdmissibilityError("negative-curvature", os.str());
    }
  }

  PeriodicProblem pp;
  pp.initial = problem.initial.with_period(problem.length);
  pp.target = Fn::constant(problem.kstar).with_period(problem.length);
  pp.horizon = problem.horizon;
  pp.length = problem.length;

  FlowSolution out;
  out.problem = problem;
  out.spectral = solve_periodic(pp, tol);
  out.velocity = out.spectral.velocity;

  const MinSample vmin = min_on_period(out.velocity, problem.length);
  out.min_velocity = vmin.value;
  out.shift_rate = std::max(0.0, -vmin.value);
  out.k0 = problem.kstar + out.shift_rate * problem.horizon;
  out.curvature =
      std::make_shared<ShiftedField>(out.spectral.field, out.shift_rate);

  // Probe the evolution for nonnegativity and terminal constancy.
  constexpr int kGrid = 512;
  double mink = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kGrid; ++it) {
    const double t = problem.horizon * it / (kGrid - 1);
    for (int is = 0; is < kGrid; ++is) {
      const double s = problem.length * is / (kGrid - 1);
      mink = std::min(mink, out.curvature->value(t, s));
    }
  }
  out.min_curvature = mink;

  double terr = 0.0;
  constexpr int kTerm = 1001;
  for (int is = 0; is < kTerm; ++is) {
    const double s = problem.length * is / (kTerm - 1);
    terr = std::max(terr,
                    std::abs(out.curvature->value(problem.horizon, s) - out.k0));
  }
  out.terminal_error = terr;
  return out;
}

CurvePolyline reconstruct_curve(const std::function<double(double)>& curvature,
                                double length, int n) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("curve length must be positive");
  }
  if (n < 8) {
    throw InvariantError("curve reconstruction needs at least 8 samples");
  }

  // Half-step sampling so each polyline edge is one Simpson panel; odd
  // nodes use the cubic half-panel rule (5, 8, -1)/12.
  const int fine = 2 * n;
  const double h = length / fine;
  std::vector<double> curv(fine + 1);
  for (int i = 0; i <= fine; ++i) curv[i] = curvature(i * h);

  std::vector<double> phi(fine + 1);
  phi[0] = 0.0;
  for (int i = 0; i + 2 <= fine; i += 2) {
    phi[i + 1] =
        phi[i] + h / 12.0 * (5.0 * curv[i] + 8.0 * curv[i + 1] - curv[i + 2]);
    phi[i + 2] = phi[i] + h / 3.0 * (curv[i] + 4.0 * curv[i + 1] + curv[i + 2]);
  }

  std::vector<double> tx(fine + 1), ty(fine + 1);
  for (int i = 0; i <= fine; ++i) {
    tx[i] = std::cos(phi[i]);
    ty[i] = std::sin(phi[i]);
  }
  std::vector<double> px(fine + 1), py(fine + 1);
  px[0] = 0.0;
  py[0] = 0.0;
  for (int i = 0; i + 2 <= fine; i += 2) {
    px[i + 1] = px[i] + h / 12.0 * (5.0 * tx[i] + 8.0 * tx[i + 1] - tx[i + 2]);
    py[i + 1] = py[i] + h / 12.0 * (5.0 * ty[i] + 8.0 * ty[i + 1] - ty[i + 2]);
    px[i + 2] = px[i] + h / 3.0 * (tx[i] + 4.0 * tx[i + 1] + tx[i + 2]);
    py[i + 2] = py[i] + h / 3.0 * (ty[i] + 4.0 * ty[i + 1] + ty[i + 2]);
  }

  CurvePolyline out;
  out.x.resize(n + 1);
  out.y.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    out.x[j] = px[2 * j];
    out.y[j] = py[2 * j];
  }
  out.closure_gap = std::hypot(px[fine] - px[0], py[fine] - py[0]);
  out.angle_defect = std::abs(phi[fine] - 2.0 * std::numbers::pi);
  return out;
}

FrameSet emit_frames(const FlowSolution& sol, int frames,
                     const std::string& directory) {
  if (frames < 2) {
    throw InvariantError("frame export needs at least 2 frames");
  }
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw DomainError("cannot create directory '" + directory +
                      "': " + ec.message());
  }

  const double horizon = sol.problem.horizon;
  const double length = sol.problem.length;
  constexpr int kSliceVertices = 512;
  constexpr int kScan = 2048;
  const Field* curvature = sol.curvature.get();

  std::vector<CurvePolyline> polys(frames);
  std::vector<double> minks(frames);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < frames; ++i) {
    const double t = horizon * i / (frames - 1);
    polys[i] = reconstruct_curve(
        [curvature, t](double s) { return curvature->value(t, s); }, length,
        kSliceVertices);
    double mink = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= kScan; ++j) {
      mink = std::min(mink, curvature->value(t, length * j / kScan));
    }
    minks[i] = mink;
  }

  FrameSet set;
  set.directory = directory;
  set.frames.resize(frames);
  for (int i = 0; i < frames; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03d.svg", i);
    FrameRecord& rec = set.frames[i];
    rec.time = horizon * i / (frames - 1);
    rec.file = name;
    rec.closure_gap = polys[i].closure_gap;
    rec.angle_defect = polys[i].angle_defect;
    rec.min_curvature = minks[i];
    write_text_file((fs::path(directory) / name).string(),
                    svg_closed_curve(polys[i].x, polys[i].y));
  }

  nlohmann::ordered_json man;
  man["kind"] = "curvature-flow-frames";
  man["frame_count"] = frames;
  man["horizon"] = horizon;
  man["length"] = length;
  man["k0"] = sol.k0;
  man["shift_rate"] = sol.shift_rate;
  auto list = nlohmann::ordered_json::array();
  for (const FrameRecord& rec : set.frames) {
    list.push_back({{"file", rec.file},
                    {"time", rec.time},
                    {"closure_gap", rec.closure_gap},
                    {"angle_defect", rec.angle_defect},
                    {"min_curvature", rec.min_curvature}});
  }
  man["frames"] = std::move(list);
  write_text_file((fs::path(directory) / "manifest.json").string(),
                  man.dump(2) + "\n");
  return set;
}

}  // namespace wavectl
