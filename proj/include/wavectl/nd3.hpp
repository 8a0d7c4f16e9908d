#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "wavectl/fn.hpp"
#include "wavectl/line1d.hpp"

namespace wavectl {

using Vec3 = std::array<double, 3>;
using Fn3 = std::function<double(const Vec3&)>;

// Expression over the spatial coordinates x1, x2, x3.
Fn3 parse_fn3(const std::string& src);

// Prescribed profiles at t = 0 and t = horizon plus the points where the
// solution is wanted. Each query is answered by its own radial solve.
struct Problem3D {
  Fn3 initial;
  Fn3 target;
  double horizon = 1.0;
  std::vector<Vec3> queries;
};

// Product rule on the unit sphere: `order` Gauss-Legendre nodes in the
// polar cosine times 2*order uniform azimuths; weights sum to 4*pi and the
// rule is exact for spherical polynomials well past degree order - 1.
struct SphericalQuadrature {
  int order = 8;
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

SphericalQuadrature sphere_quadrature(int order = 8);

// Average of h over the sphere of the given radius about the center
// (weighted node sum divided by the full solid angle). radius must be >= 0.
double spherical_mean(const Fn3& h, const Vec3& center, double radius,
                      const SphericalQuadrature& q);

struct RadialOptions {
  int quad_order = 8;
  double table_pad = 0.5;     // solve-table halfwidth beyond the horizon
  double sample_step = 1e-3;  // radial sample target, snapped to divide T
};

// One-dimensional two-point problem for w(t, r) = r * (mean of the data
// over the radius-r sphere about x). The profiles are sampled on a uniform
// radial grid aligned with 0 and the horizon and mirrored to odd functions.
LineProblem reduce_to_radial(const Problem3D& p, const Vec3& x,
                             const RadialOptions& opt = {});

// Solution value at (t, x): the radial solve is probed at rprobe and
// rprobe/2 and the r -> 0 limit of w/r is Richardson-extrapolated.
double eval_3d(const Problem3D& p, double t, const Vec3& x,
               double rprobe = 1e-3, const RadialOptions& opt = {});

// eval_3d for every query point of the problem; the independent radial
// solves run in parallel.
std::vector<double> eval_queries(const Problem3D& p, double t,
                                 double rprobe = 1e-3,
                                 const RadialOptions& opt = {});

}  // namespace wavectl
