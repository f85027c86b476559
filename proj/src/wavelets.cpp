#include "wmfs/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wmfs/quadrature.hpp"

namespace wmfs {

std::vector<double> peak_breakpoints(const BoundaryCurve& curve,
                                     double theta_star, double h) {
  double lo = theta_star - pi, hi = theta_star + pi;
  std::vector<double> breaks{lo, hi, theta_star};
  h = std::max(h, 1e-13);
  for (double w = h; w < pi; w *= 2.0) {
    breaks.push_back(theta_star - w);
    breaks.push_back(theta_star + w);
  }
  for (double c : curve.corners)
    for (int shift = -1; shift <= 1; ++shift) {
      double t = c + shift * two_pi;
      if (t > lo && t < hi) breaks.push_back(t);
    }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return b - a < 1e-14; }),
               breaks.end());
  return breaks;
}

WaveletFamily normalize(const SourceSet& sources, const BoundaryCurve& curve,
                        int order) {
  if (order < 1) throw std::invalid_argument("normalize: order must be >= 1");
  WaveletFamily family;
  family.sources = sources;
  family.order = order;
  family.b.assign(sources.size(), 0.0);
  int p = 2 * order + 2;
  parallel_for(sources.size(), [&](std::size_t j) {
    cplx q = sources.points[j].point;
    ClosestPoint cp = closest_point(curve, q);
    if (cp.distance < 1e-12)
      throw std::domain_error("normalize: source lies on the boundary curve");
    double speed = arclength_jacobian(curve, cp.theta);
    auto breaks = peak_breakpoints(curve, cp.theta, cp.distance / speed);
    // |w - q| near the peak carries cancellation noise ~ eps |q| / d, which
    // bounds the achievable relative accuracy for sources very close to the
    // curve. b_j is pure column scaling, so the looser tolerance is benign.
    double noise = std::numeric_limits<double>::epsilon() *
                   (1.0 + std::abs(q)) / cp.distance;
    double tol = std::max(1e-11, 50.0 * noise);
    double mass = adaptive_integrate(
        [&](double t) {
          double s = std::abs(position_at(curve, t) - q);
          return std::pow(s, -p) * arclength_jacobian(curve, t);
        },
        breaks, tol);
    family.b[j] = 1.0 / std::sqrt(mass);
  });
  return family;
}

cplx wavelet_value(const WaveletFamily& family, std::size_t j, cplx z) {
  cplx dz = z - family.sources.points[j].point;
  if (dz == 0.0) throw std::domain_error("wavelet_value: evaluation at the pole");
  return family.b[j] * ipow(dz, -(family.order + 1));
}

double element_inner_product(const WaveletFamily& family, std::size_t j,
                             cplx w_start, cplx w_end, TraceKind trace,
                             bool companion) {
  int k = family.order;
  cplx a = w_start - family.sources.points[j].point;
  cplx b = w_end - family.sources.points[j].point;
  if (a == 0.0 || b == 0.0)
    throw std::domain_error("element_inner_product: segment endpoint hits the source");
  cplx delta = ipow(a, -k) - ipow(b, -k);
  double scale = family.b[j] / k;
  if (trace == TraceKind::neumann)
    return scale * (companion ? delta.real() : delta.imag());
  return companion ? -scale * delta.imag() : scale * delta.real();
}

Eigen::MatrixXcd independence_gram(const WaveletFamily& family,
                                   const BoundaryCurve& curve) {
  std::size_t n = family.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(family.sources.points[i].point - family.sources.points[j].point) < 1e-14)
        throw std::invalid_argument("independence_gram: duplicate sources");

  std::vector<ClosestPoint> near(n);
  for (std::size_t i = 0; i < n; ++i)
    near[i] = closest_point(curve, family.sources.points[i].point);

  Eigen::MatrixXcd gram(n, n);
  int p = family.order + 1;
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) entries.emplace_back(i, j);
  parallel_for(entries.size(), [&](std::size_t e) {
    auto [i, j] = entries[e];
    cplx qi = family.sources.points[i].point;
    cplx qj = family.sources.points[j].point;
    double hi = near[i].distance / arclength_jacobian(curve, near[i].theta);
    auto breaks = peak_breakpoints(curve, near[i].theta, hi);
    if (j != i) {
      double hj = near[j].distance / arclength_jacobian(curve, near[j].theta);
      double tj = near[j].theta;
      // Recenter the second peak into the window of the first.
      while (tj < breaks.front()) tj += two_pi;
      while (tj > breaks.back()) tj -= two_pi;
      auto extra = peak_breakpoints(curve, tj, hj);
      for (double t : extra)
        if (t > breaks.front() && t < breaks.back()) breaks.push_back(t);
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end(),
                               [](double a, double b) { return b - a < 1e-14; }),
                   breaks.end());
    }
    cplx value = adaptive_integrate_complex(
        [&](double t) {
          cplx w = position_at(curve, t);
          cplx vi = ipow(w - qi, -p);
          cplx vj = ipow(w - qj, -p);
          return vi * std::conj(vj) * arclength_jacobian(curve, t);
        },
        breaks, 1e-10);
    value *= family.b[i] * family.b[j];
    gram(i, j) = value;
    if (j != i) gram(j, i) = std::conj(value);
  });
  return gram;
}

}  // namespace wmfs
