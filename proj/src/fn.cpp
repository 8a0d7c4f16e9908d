#include "wavectl/fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wavectl/errors.hpp"
#include "wavectl/expr.hpp"

namespace wavectl {

double Fn::deriv(double x, int order) const {
  if (order < 1 || order > 3)
    throw InvariantError("derivative order must be 1..3");
  return impl_->deriv(x, order);
}

double Fn::deriv_side(double x, int order, bool from_left) const {
  if (order < 1 || order > 3)
    throw InvariantError("derivative order must be 1..3");
  return impl_->deriv_side(x, order, from_left);
}

namespace {

class ConstantFn final : public FnImpl {
 public:
  explicit ConstantFn(double c) : c_(c) {}
  double value(double) const override { return c_; }
  double deriv(double, int) const override { return 0.0; }

 private:
  double c_;
};

class ExprFn final : public FnImpl {
 public:
  explicit ExprFn(expr::NodePtr f) {
    d_[0] = std::move(f);
    for (int i = 1; i < 4; ++i) d_[i] = expr::diff(d_[i - 1], 0);
  }
  double value(double x) const override {
    return expr::eval(*d_[0], std::span<const double>(&x, 1));
  }
  double deriv(double x, int order) const override {
    return expr::eval(*d_[order], std::span<const double>(&x, 1));
  }

 private:
  std::array<expr::NodePtr, 4> d_;
};

// Uniform samples with Catmull-Rom interpolation. Ghost points at the ends
// come from quadratic extrapolation; periodic tables wrap instead.
class SampledFn final : public FnImpl {
 public:
  SampledFn(double x0, double dx, std::vector<double> v,
            std::optional<double> period)
      : x0_(x0), dx_(dx), v_(std::move(v)), period_(period) {
    if (dx_ <= 0.0) throw DomainError("sample spacing must be positive");
    if (v_.size() < 4) throw DomainError("need at least 4 samples");
    if (period_) {
      double span = dx_ * static_cast<double>(v_.size() - 1);
      if (std::fabs(span - *period_) > 1e-9 * std::max(1.0, *period_))
        throw DomainError(
            "periodic sample table must cover exactly one period");
    }
  }

  double value(double x) const override { return interp(to_local(x)); }

  double deriv(double x, int order) const override {
    // Centered differences at the table spacing; stencils slide inward at a
    // non-periodic edge.
    double h = dx_;
    double lo = x0_, hi = x0_ + dx_ * static_cast<double>(v_.size() - 1);
    auto F = [&](double q) { return interp(to_local(q)); };
    if (!period_) {
      double need = (order == 3) ? 2.0 * h : h;
      if (x - need < lo) x = lo + need;
      if (x + need > hi) x = hi - need;
    }
    switch (order) {
      case 1:
        return (F(x + h) - F(x - h)) / (2.0 * h);
      case 2:
        return (F(x + h) - 2.0 * F(x) + F(x - h)) / (h * h);
      default:
        return (F(x + 2 * h) - 2.0 * F(x + h) + 2.0 * F(x - h) -
                F(x - 2 * h)) /
               (2.0 * h * h * h);
    }
  }

 private:
  double to_local(double x) const {
    double n1 = static_cast<double>(v_.size() - 1);
    double u = (x - x0_) / dx_;
    if (period_) {
      u = std::fmod(u, n1);
      if (u < 0.0) u += n1;
      return u;
    }
    if (u < -1e-9 || u > n1 + 1e-9)
      throw DomainError("evaluation outside sampled domain");
    return std::clamp(u, 0.0, n1);
  }

  double point(long i) const {
    long n = static_cast<long>(v_.size());
    if (period_) {
      long m = n - 1;
      i %= m;
      if (i < 0) i += m;
      return v_[static_cast<size_t>(i)];
    }
    if (i < 0) return 3.0 * v_[0] - 3.0 * v_[1] + v_[2];
    if (i >= n)
      return 3.0 * v_[static_cast<size_t>(n - 1)] -
             3.0 * v_[static_cast<size_t>(n - 2)] +
             v_[static_cast<size_t>(n - 3)];
    return v_[static_cast<size_t>(i)];
  }

  double interp(double u) const {
    long cells = static_cast<long>(v_.size()) - 1;
    long j = static_cast<long>(std::floor(u));
    j = std::clamp(j, 0L, cells - 1);
    double t = u - static_cast<double>(j);
    double p0 = point(j - 1), p1 = point(j), p2 = point(j + 1),
           p3 = point(j + 2);
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * t +
                  (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
  }

  double x0_, dx_;
  std::vector<double> v_;
  std::optional<double> period_;
};

class LinComboFn final : public FnImpl {
 public:
  LinComboFn(double c0, std::vector<std::pair<double, Fn>> terms)
      : c0_(c0), terms_(std::move(terms)) {}
  double value(double x) const override {
    double s = c0_;
    for (const auto& [w, f] : terms_) s += w * f(x);
    return s;
  }
  double deriv(double x, int order) const override {
    double s = 0.0;
    for (const auto& [w, f] : terms_) s += w * f.deriv(x, order);
    return s;
  }
  double deriv_side(double x, int order, bool from_left) const override {
    double s = 0.0;
    for (const auto& [w, f] : terms_) s += w * f.deriv_side(x, order, from_left);
    return s;
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    for (const auto& [w, f] : terms_) {
      (void)w;
      f.breakpoints(a, b, out);
    }
  }

 private:
  double c0_;
  std::vector<std::pair<double, Fn>> terms_;
};

class AffineArgFn final : public FnImpl {
 public:
  AffineArgFn(Fn f, double a, double b) : f_(std::move(f)), a_(a), b_(b) {}
  double value(double x) const override { return f_(a_ * x + b_); }
  double deriv(double x, int order) const override {
    double scale = std::pow(a_, order);
    return scale * f_.deriv(a_ * x + b_, order);
  }
  double deriv_side(double x, int order, bool from_left) const override {
    double scale = std::pow(a_, order);
    bool inner_left = (a_ >= 0.0) ? from_left : !from_left;
    return scale * f_.deriv_side(a_ * x + b_, order, inner_left);
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    if (a_ == 0.0) return;
    double ia = a_ * a + b_, ib = a_ * b + b_;
    if (ia > ib) std::swap(ia, ib);
    std::vector<double> inner;
    f_.breakpoints(ia, ib, inner);
    for (double s : inner) out.push_back((s - b_) / a_);
  }

 private:
  Fn f_;
  double a_, b_;
};

class ExpOfFn final : public FnImpl {
 public:
  explicit ExpOfFn(Fn f) : f_(std::move(f)) {}
  double value(double x) const override { return std::exp(f_(x)); }
  double deriv(double x, int order) const override {
    double e = std::exp(f_(x));
    double d1 = f_.deriv(x, 1);
    if (order == 1) return e * d1;
    double d2 = f_.deriv(x, 2);
    if (order == 2) return e * (d2 + d1 * d1);
    double d3 = f_.deriv(x, 3);
    return e * (d3 + 3.0 * d1 * d2 + d1 * d1 * d1);
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    f_.breakpoints(a, b, out);
  }

 private:
  Fn f_;
};

class PolyFn final : public FnImpl {
 public:
  PolyFn(double center, std::vector<double> c)
      : center_(center), c_(std::move(c)) {
    if (c_.empty()) c_.push_back(0.0);
  }
  double value(double x) const override { return horner(c_, x - center_); }
  double deriv(double x, int order) const override {
    std::vector<double> d = c_;
    for (int k = 0; k < order; ++k) {
      for (size_t i = 1; i < d.size(); ++i)
        d[i - 1] = static_cast<double>(i) * d[i];
      if (!d.empty()) d.pop_back();
      if (d.empty()) return 0.0;
    }
    return horner(d, x - center_);
  }

 private:
  static double horner(const std::vector<double>& c, double u) {
    double s = 0.0;
    for (size_t i = c.size(); i-- > 0;) s = s * u + c[i];
    return s;
  }
  double center_;
  std::vector<double> c_;
};

class TrigSeriesFn final : public FnImpl {
 public:
  TrigSeriesFn(double base, double length, std::vector<double> ca,
               std::vector<double> sa)
      : base_(base), length_(length), ca_(std::move(ca)), sa_(std::move(sa)) {}
  double value(double x) const override {
    double s = base_;
    size_t K = std::max(ca_.size(), sa_.size());
    for (size_t k = 1; k <= K; ++k) {
      double w = 2.0 * M_PI * static_cast<double>(k) / length_;
      if (k <= ca_.size() && ca_[k - 1] != 0.0) s += ca_[k - 1] * std::cos(w * x);
      if (k <= sa_.size() && sa_[k - 1] != 0.0) s += sa_[k - 1] * std::sin(w * x);
    }
    return s;
  }
  double deriv(double x, int order) const override {
    double s = 0.0;
    size_t K = std::max(ca_.size(), sa_.size());
    for (size_t k = 1; k <= K; ++k) {
      double w = 2.0 * M_PI * static_cast<double>(k) / length_;
      double wn = std::pow(w, order);
      double A = (k <= ca_.size()) ? ca_[k - 1] : 0.0;
      double B = (k <= sa_.size()) ? sa_[k - 1] : 0.0;
      // d/dx rotates (cos, sin) by a quarter period per order.
      switch (order & 3) {
        case 1: s += wn * (-A * std::sin(w * x) + B * std::cos(w * x)); break;
        case 2: s += wn * (-A * std::cos(w * x) - B * std::sin(w * x)); break;
        case 3: s += wn * (A * std::sin(w * x) - B * std::cos(w * x)); break;
        default: s += wn * (A * std::cos(w * x) + B * std::sin(w * x)); break;
      }
    }
    return s;
  }

 private:
  double base_, length_;
  std::vector<double> ca_, sa_;
};

class PiecewiseFn final : public FnImpl {
 public:
  PiecewiseFn(std::vector<double> knots, std::vector<Fn> pieces)
      : knots_(std::move(knots)), pieces_(std::move(pieces)) {
    if (knots_.size() != pieces_.size() + 1 || pieces_.empty())
      throw InvariantError("piecewise: need n+1 knots for n pieces");
    if (!std::is_sorted(knots_.begin(), knots_.end()))
      throw InvariantError("piecewise: knots must be increasing");
  }

  double value(double x) const override { return pieces_[locate(x)](x); }
  double deriv(double x, int order) const override {
    return pieces_[locate(x)].deriv(x, order);
  }
  double deriv_side(double x, int order, bool from_left) const override {
    size_t j = locate_side(x, from_left);
    return pieces_[j].deriv_side(x, order, from_left);
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    for (size_t i = 1; i + 1 < knots_.size(); ++i)
      if (knots_[i] > a && knots_[i] < b) out.push_back(knots_[i]);
    for (size_t i = 0; i < pieces_.size(); ++i) {
      double lo = std::max(a, knots_[i]), hi = std::min(b, knots_[i + 1]);
      if (lo < hi) pieces_[i].breakpoints(lo, hi, out);
    }
  }

 private:
  size_t locate(double x) const {
    double slack = 1e-9 * (1.0 + std::fabs(knots_.front()) +
                           std::fabs(knots_.back()));
    if (x < knots_.front() - slack || x > knots_.back() + slack)
      throw DomainError("evaluation outside piecewise domain");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    size_t j = static_cast<size_t>(it - knots_.begin());
    if (j == 0) return 0;
    if (j >= knots_.size()) return pieces_.size() - 1;
    return j - 1;
  }
  size_t locate_side(double x, bool from_left) const {
    size_t j = locate(x);
    if (from_left && j > 0 && x <= knots_[j]) return j - 1;
    return j;
  }

  std::vector<double> knots_;
  std::vector<Fn> pieces_;
};

class CallableFn final : public FnImpl {
 public:
  CallableFn(std::function<double(double)> f, double h)
      : f_(std::move(f)), h_(h) {}
  double value(double x) const override { return f_(x); }
  double deriv(double x, int order) const override {
    double h = h_;
    double f2 = f_(x + 2 * h), f1 = f_(x + h), fm1 = f_(x - h),
           fm2 = f_(x - 2 * h);
    switch (order) {
      case 1:
        return (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
      case 2: {
        double f0 = f_(x);
        return (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) /
               (12.0 * h * h);
      }
      default:
        return (f2 - 2.0 * f1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    }
  }

 private:
  std::function<double(double)> f_;
  double h_;
};

// Odd or even reflection about 0 of a function on [0,L], made 2L-periodic.
class ReflectExtendFn final : public FnImpl {
 public:
  ReflectExtendFn(Fn f, double length, bool odd)
      : f_(std::move(f)), len_(length), odd_(odd) {}

  double value(double x) const override {
    double xi = fold(x);
    if (xi >= 0.0) return f_(xi);
    return odd_ ? -f_(-xi) : f_(-xi);
  }

  double deriv(double x, int order) const override {
    double xi = fold(x);
    if (xi >= 0.0) return f_.deriv(xi, order);
    // Reflection flips the argument sign; odd extensions flip the value too.
    double inner = f_.deriv(-xi, order);
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return odd_ ? -sign * inner : sign * inner;
  }

  void breakpoints(double a, double b, std::vector<double>& out) const override {
    // Junctions sit at every multiple of L; they are smooth when the data is
    // compatible, but quadrature splits there regardless.
    double k0 = std::ceil(a / len_);
    for (double k = k0; k * len_ < b; k += 1.0) {
      double s = k * len_;
      if (s > a && s < b) out.push_back(s);
    }
  }

 private:
  double fold(double x) const {
    double p = 2.0 * len_;
    double xi = x - p * std::floor((x + len_) / p);
    // xi in [-L, L)
    return xi;
  }

  Fn f_;
  double len_;
  bool odd_;
};

}  // namespace

Fn Fn::parse(std::string_view src) {
  static const std::vector<std::string> vars = {"x"};
  return Fn(std::make_shared<ExprFn>(expr::parse(src, vars)));
}

Fn Fn::constant(double c) { return Fn(std::make_shared<ConstantFn>(c)); }

Fn Fn::samples(double x0, double dx, std::vector<double> values,
               std::optional<double> period) {
  return Fn(std::make_shared<SampledFn>(x0, dx, std::move(values), period),
            period);
}

Fn Fn::from_csv(const std::string& path, std::optional<double> period) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open CSV file: " + path);
  std::vector<double> xs, vs;
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string cell_x, cell_v;
    std::istringstream row(line);
    if (!std::getline(row, cell_x, ',') || !std::getline(row, cell_v))
      throw DomainError(path + ": line " + std::to_string(lineno) +
                        ": expected two comma-separated columns");
    char* end = nullptr;
    double xv = std::strtod(cell_x.c_str(), &end);
    if (end == cell_x.c_str()) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw DomainError(path + ": line " + std::to_string(lineno) +
                        ": malformed number");
    }
    first = false;
    double vv = std::strtod(cell_v.c_str(), &end);
    xs.push_back(xv);
    vs.push_back(vv);
  }
  if (xs.size() < 4) throw DomainError(path + ": need at least 4 samples");
  double dx = xs[1] - xs[0];
  if (dx <= 0.0) throw DomainError(path + ": x must be strictly increasing");
  for (size_t i = 1; i < xs.size(); ++i) {
    double step = xs[i] - xs[i - 1];
    if (std::fabs(step - dx) > 1e-9 * std::max(1.0, std::fabs(dx)))
      throw DomainError(path + ": x must be uniformly spaced");
  }
  return samples(xs[0], dx, std::move(vs), period);
}

Fn Fn::poly(double center, std::vector<double> coeffs) {
  return Fn(std::make_shared<PolyFn>(center, std::move(coeffs)));
}

Fn Fn::trig_series(double base, double length, std::vector<double> cos_amp,
                   std::vector<double> sin_amp) {
  return Fn(std::make_shared<TrigSeriesFn>(base, length, std::move(cos_amp),
                                           std::move(sin_amp)),
            length);
}

Fn Fn::piecewise(std::vector<double> knots, std::vector<Fn> pieces) {
  return Fn(std::make_shared<PiecewiseFn>(std::move(knots), std::move(pieces)));
}

Fn Fn::from_callable(std::function<double(double)> f, double deriv_step) {
  return Fn(std::make_shared<CallableFn>(std::move(f), deriv_step));
}

Fn lin_combo(double c0, std::vector<std::pair<double, Fn>> terms) {
  return Fn(std::make_shared<LinComboFn>(c0, std::move(terms)));
}

Fn operator+(const Fn& a, const Fn& b) {
  return lin_combo(0.0, {{1.0, a}, {1.0, b}});
}
Fn operator-(const Fn& a, const Fn& b) {
  return lin_combo(0.0, {{1.0, a}, {-1.0, b}});
}
Fn operator*(double w, const Fn& f) { return lin_combo(0.0, {{w, f}}); }
Fn operator+(const Fn& a, double c) { return lin_combo(c, {{1.0, a}}); }
Fn operator-(const Fn& a, double c) { return lin_combo(-c, {{1.0, a}}); }

Fn affine_arg(const Fn& f, double a, double b) {
  return Fn(std::make_shared<AffineArgFn>(f, a, b));
}

Fn exp_of(const Fn& f) { return Fn(std::make_shared<ExpOfFn>(f)); }

Fn reflect_extend(const Fn& f, double length, bool odd) {
  return Fn(std::make_shared<ReflectExtendFn>(f, length, odd),
            2.0 * length);
}

}  // namespace wavectl
