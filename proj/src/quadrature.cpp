#include "wavectl/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "wavectl/errors.hpp"

namespace wavectl {

namespace {

// Sorted, de-duplicated interior breakpoints of f in (a,b), bracketed by a,b.
std::vector<double> split_points(const Fn& f, double a, double b) {
  std::vector<double> pts;
  f.breakpoints(a, b, pts);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.push_back(a);
  double eps = 1e-13 * (1.0 + std::fabs(a) + std::fabs(b));
  for (double p : pts)
    if (p > out.back() + eps && p < b - eps) out.push_back(p);
  out.push_back(b);
  return out;
}

}  // namespace

double Quadrature::integrate(const Fn& f, double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a);
  std::vector<double> pts = split_points(f, a, b);
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    double len = hi - lo;
    int n = static_cast<int>(
        std::ceil(len * static_cast<double>(panels_per_unit)));
    n = std::max(n, min_panels);
    total += simpson([&](double x) { return f(x); }, lo, hi, n);
  }
  return total;
}

Antiderivative::Antiderivative(Fn f, double lo, double hi, int cells_per_unit,
                               Quadrature fallback)
    : f_(std::move(f)), lo_(lo), hi_(hi), fallback_(fallback) {
  if (!(hi_ > lo_)) throw InvariantError("antiderivative: empty span");
  // Uniform cells merged with the function's breakpoints, so each cell is
  // smooth inside and one Simpson pair per cell is plenty.
  double span = hi_ - lo_;
  long n = std::max(8L, static_cast<long>(
                            std::ceil(span * cells_per_unit)));
  std::vector<double> edges;
  edges.reserve(static_cast<size_t>(n) + 16);
  for (long i = 0; i <= n; ++i)
    edges.push_back(lo_ + span * static_cast<double>(i) /
                              static_cast<double>(n));
  std::vector<double> brk;
  f_.breakpoints(lo_, hi_, brk);
  for (double p : brk) edges.push_back(p);
  std::sort(edges.begin(), edges.end());
  double eps = 1e-13 * (1.0 + std::fabs(lo_) + std::fabs(hi_));
  knots_.push_back(edges.front());
  for (double e : edges)
    if (e > knots_.back() + eps) knots_.push_back(e);
  knots_.back() = hi_;

  cum_.assign(knots_.size(), 0.0);
  for (size_t j = 1; j < knots_.size(); ++j) {
    double a = knots_[j - 1], b = knots_[j];
    double m = 0.5 * (a + b);
    double cell = (b - a) / 6.0 * (f_(a) + 4.0 * f_(m) + f_(b));
    cum_[j] = cum_[j - 1] + cell;
  }
}

double Antiderivative::cumulative_at(double x) const {
  if (x <= lo_) {
    if (x == lo_) return 0.0;
    return -fallback_.integrate(f_, x, lo_);
  }
  if (x >= hi_) {
    if (x == hi_) return cum_.back();
    return cum_.back() + fallback_.integrate(f_, hi_, x);
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  size_t j = static_cast<size_t>(it - knots_.begin()) - 1;
  if (j >= knots_.size() - 1) j = knots_.size() - 2;
  double a = knots_[j];
  double partial = simpson([&](double q) { return f_(q); }, a, x, 2);
  return cum_[j] + partial;
}

double Antiderivative::between(double a, double b) const {
  return cumulative_at(b) - cumulative_at(a);
}

}  // namespace wavectl
