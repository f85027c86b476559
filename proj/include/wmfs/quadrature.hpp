#pragma once

#include <functional>
#include <vector>

#include "wmfs/geometry.hpp"
#include "wmfs/util.hpp"

namespace wmfs {

struct GaussRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // positive, sum 2
};

/// Gauss-Legendre rule of given order, nodes found by Newton iteration on
/// the Legendre recurrence to 1e-15. Cached per order.
const GaussRule& gauss_rule(int n);

/// Parameter interval [theta_start, theta_end) of a boundary piece whose
/// interior contains no corner. theta_start may sit below -pi so wrap
/// segments stay contiguous; positions wrap through the curve's periodicity.
struct Segment {
  double theta_start = 0.0;
  double theta_end = 0.0;
  double length() const { return theta_end - theta_start; }
};

using BoundaryData = std::function<double(const BoundaryPoint&)>;

/// Integral of g over the segment in arclength measure with a single
/// 10-point Gauss-Legendre panel, the production rule of the assembly.
double integrate_data(const BoundaryCurve& curve, const Segment& seg,
                      const BoundaryData& g);

/// Oracle-grade version: dyadic panel subdivision until the global error
/// estimate falls below rel_tol times the integral's absolute mass.
double integrate_data_refined(const BoundaryCurve& curve, const Segment& seg,
                              const BoundaryData& g, double rel_tol = 1e-12);

/// Adaptive integration of a plain function of theta over panels delimited
/// by breaks (sorted ascending). Worst-panel-first refinement; throws
/// std::runtime_error if max_panels is exhausted before convergence.
double adaptive_integrate(const std::function<double(double)>& f,
                          const std::vector<double>& breaks, double rel_tol,
                          int max_panels = 20000);

cplx adaptive_integrate_complex(const std::function<cplx(double)>& f,
                                const std::vector<double>& breaks,
                                double rel_tol, int max_panels = 20000);

/// Arclength Jacobian |w'(theta)| = sqrt(r^2 + r'^2).
double arclength_jacobian(const BoundaryCurve& curve, double theta);

}  // namespace wmfs
