#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wmfs/util.hpp"

namespace wmfs {

/// Planar Jordan curve in polar form w(theta) = r(theta) e^{i theta},
/// theta in [-pi, pi), with r positive, Lipschitz and 2pi-periodic.
/// Corner angles mark the finitely many points where r' jumps; tangent and
/// normal are undefined there.
struct BoundaryCurve {
  std::string name;
  std::function<double(double)> radius;
  std::function<double(double)> radius_deriv;
  std::vector<double> corners;  // sorted, in [-pi, pi)
};

struct BoundaryPoint {
  double theta = 0.0;
  cplx position;
  cplx tangent;  // unit, counterclockwise
  cplx normal;   // unit, outward
};

BoundaryCurve circle_curve(double radius = 1.0);
BoundaryCurve star_curve();   // r = 3 + cos(4 theta)
BoundaryCurve square_curve(); // r = 1 / max(|cos theta|, |sin theta|), side 2

/// Piecewise-linear radius through (theta, r) samples sorted by theta.
/// Knots with a material slope jump are reported as corners.
BoundaryCurve tabulated_curve(std::vector<std::pair<double, double>> samples);

cplx position_at(const BoundaryCurve& curve, double theta);

/// Position, tangent and normal at a non-corner angle; throws
/// std::domain_error when theta hits a corner.
BoundaryPoint point_at(const BoundaryCurve& curve, double theta);

bool is_corner(const BoundaryCurve& curve, double theta);

struct ClosestPoint {
  double theta = 0.0;
  double distance = 0.0;
};

/// Nearest boundary point by dense angular sampling (4096 angles) plus
/// golden-section refinement; distance is accurate to ~1e-8 relative for
/// points at O(1) separation.
ClosestPoint closest_point(const BoundaryCurve& curve, cplx z);
double distance_to_curve(const BoundaryCurve& curve, cplx z);

/// Strict interior test via the polar inequality with a guard band.
bool inside_domain(const BoundaryCurve& curve, cplx z, double guard = 1e-12);

struct BoundingBox {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
};

BoundingBox bounding_box(const BoundaryCurve& curve);

/// Bi-Lipschitz distortion of the polar stretch
/// rho(s e^{i theta}) = s r(theta) e^{i theta} relative to pure scaling:
/// the largest ratio sigma_max / r = r / sigma_min of the singular values
/// of its differential, sampled over theta.  Scale invariant, so circles
/// of any radius give exactly 1.  Diagnostic only.
double lipschitz_constant(const BoundaryCurve& curve);

}  // namespace wmfs
