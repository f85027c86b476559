#include "wmfs/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace wmfs {

namespace {

constexpr int kScanSamples = 4096;
constexpr double kCornerTol = 1e-12;

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

BoundaryCurve circle_curve(double radius) {
  if (radius <= 0.0) throw std::invalid_argument("circle_curve: radius must be positive");
  return BoundaryCurve{"circle", [radius](double) { return radius; },
                       [](double) { return 0.0; },
                       {}};
}

BoundaryCurve star_curve() {
  return BoundaryCurve{"star",
                       [](double t) { return 3.0 + std::cos(4.0 * t); },
                       [](double t) { return -4.0 * std::sin(4.0 * t); },
                       {}};
}

BoundaryCurve square_curve() {
  auto radius = [](double t) {
    return 1.0 / std::max(std::abs(std::cos(t)), std::abs(std::sin(t)));
  };
  // On |cos| >= |sin| sides r = 1/|cos|, elsewhere r = 1/|sin|.
  auto deriv = [](double t) {
    double c = std::cos(t), s = std::sin(t);
    if (std::abs(c) >= std::abs(s)) {
      double sgn = c >= 0.0 ? 1.0 : -1.0;
      return sgn * s / (c * c);
    }
    double sgn = s >= 0.0 ? 1.0 : -1.0;
    return -sgn * c / (s * s);
  };
  return BoundaryCurve{"square", radius, deriv,
                       {-3.0 * pi / 4.0, -pi / 4.0, pi / 4.0, 3.0 * pi / 4.0}};
}

BoundaryCurve tabulated_curve(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 3) throw std::invalid_argument("tabulated_curve: need at least 3 samples");
  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    if (samples[i + 1].first - samples[i].first < 1e-12)
      throw std::invalid_argument("tabulated_curve: duplicate sample angles");
  for (const auto& [t, r] : samples) {
    if (t < -pi || t >= pi) throw std::invalid_argument("tabulated_curve: angles must lie in [-pi, pi)");
    if (r <= 0.0) throw std::invalid_argument("tabulated_curve: radii must be positive");
  }

  // Close the table periodically so lookups never fall off an end.
  auto knots = std::make_shared<std::vector<std::pair<double, double>>>(std::move(samples));
  auto locate = [knots](double t) {
    t = wrap_angle(t);
    const auto& k = *knots;
    auto it = std::upper_bound(k.begin(), k.end(), std::make_pair(t, 1e300));
    double t0, r0, t1, r1;
    if (it == k.begin()) {
      t0 = k.back().first - two_pi;
      r0 = k.back().second;
      t1 = k.front().first;
      r1 = k.front().second;
    } else if (it == k.end()) {
      t0 = k.back().first;
      r0 = k.back().second;
      t1 = k.front().first + two_pi;
      r1 = k.front().second;
    } else {
      t0 = (it - 1)->first;
      r0 = (it - 1)->second;
      t1 = it->first;
      r1 = it->second;
    }
    return std::array<double, 4>{t0, r0, t1, r1};
  };
  auto radius = [locate](double t) {
    auto [t0, r0, t1, r1] = locate(t);
    double u = (wrap_angle(t) - t0) / (t1 - t0);
    return r0 + (r1 - r0) * u;
  };
  auto deriv = [locate](double t) {
    auto [t0, r0, t1, r1] = locate(t);
    return (r1 - r0) / (t1 - t0);
  };

  std::vector<double> corners;
  const auto& k = *knots;
  for (std::size_t i = 0; i < k.size(); ++i) {
    double sl = deriv(k[i].first - 1e-9);
    double sr = deriv(k[i].first + 1e-9);
    if (std::abs(sr - sl) > 1e-6 * (1.0 + std::abs(sl))) corners.push_back(k[i].first);
  }
  return BoundaryCurve{"table", radius, deriv, corners};
}

cplx position_at(const BoundaryCurve& curve, double theta) {
  double t = wrap_angle(theta);
  return curve.radius(t) * cplx(std::cos(t), std::sin(t));
}

bool is_corner(const BoundaryCurve& curve, double theta) {
  double t = wrap_angle(theta);
  for (double c : curve.corners)
    if (std::abs(wrap_angle(t - c)) < kCornerTol) return true;
  return false;
}

BoundaryPoint point_at(const BoundaryCurve& curve, double theta) {
  double t = wrap_angle(theta);
  if (is_corner(curve, t))
    throw std::domain_error("point_at: tangent/normal undefined at a corner angle");
  double r = curve.radius(t);
  double dr = curve.radius_deriv(t);
  cplx e = cplx(std::cos(t), std::sin(t));
  cplx vel = (cplx(dr, r)) * e;  // d/dtheta of r(theta) e^{i theta}
  cplx tan = vel / std::abs(vel);
  return BoundaryPoint{t, r * e, tan, cplx(0.0, -1.0) * tan};
}

ClosestPoint closest_point(const BoundaryCurve& curve, cplx z) {
  auto dist2 = [&](double t) { return std::norm(z - position_at(curve, t)); };

  // Dense scan, then refine every competitive local minimum.
  std::array<double, kScanSamples> d2;
  for (int i = 0; i < kScanSamples; ++i)
    d2[i] = dist2(-pi + two_pi * i / kScanSamples);
  double best = *std::min_element(d2.begin(), d2.end());

  double step = two_pi / kScanSamples;
  double best_theta = 0.0, best_d2 = std::numeric_limits<double>::max();
  // Generous margin: a sample two steps from the true minimizer can sit
  // higher by ~2 * step * curve speed; refine every candidate within it.
  double reach = std::sqrt(best) + 16.0 * step;
  double margin = reach * reach;
  for (int i = 0; i < kScanSamples; ++i) {
    double prev = d2[(i + kScanSamples - 1) % kScanSamples];
    double next = d2[(i + 1) % kScanSamples];
    if (d2[i] > prev || d2[i] > next || d2[i] > margin) continue;
    double t0 = -pi + step * i;
    double t = golden_min(dist2, t0 - step, t0 + step, 1e-12);
    double v = dist2(t);
    if (v < best_d2) {
      best_d2 = v;
      best_theta = t;
    }
  }
  return ClosestPoint{wrap_angle(best_theta), std::sqrt(best_d2)};
}

double distance_to_curve(const BoundaryCurve& curve, cplx z) {
  return closest_point(curve, z).distance;
}

bool inside_domain(const BoundaryCurve& curve, cplx z, double guard) {
  double t = std::arg(z);
  return curve.radius(t) - std::abs(z) > guard;
}

BoundingBox bounding_box(const BoundaryCurve& curve) {
  BoundingBox box;
  bool first = true;
  auto visit = [&](double t) {
    cplx w = position_at(curve, t);
    if (first) {
      box = {w.real(), w.real(), w.imag(), w.imag()};
      first = false;
      return;
    }
    box.xmin = std::min(box.xmin, w.real());
    box.xmax = std::max(box.xmax, w.real());
    box.ymin = std::min(box.ymin, w.imag());
    box.ymax = std::max(box.ymax, w.imag());
  };
  for (int i = 0; i < kScanSamples; ++i) visit(-pi + two_pi * i / kScanSamples);
  for (double c : curve.corners) visit(c);
  return box;
}

double lipschitz_constant(const BoundaryCurve& curve) {
  // Differential of the polar stretch in the rotating frame is
  // [[r, r'], [0, r]], with singular values sigma_max >= sigma_min and
  // sigma_max * sigma_min = r^2.  The distortion relative to pure scaling,
  // K = sigma_max / r = r / sigma_min, is scale invariant and equals
  // m/2 + sqrt(1 + m^2/4) with m = |r'| / r.
  double k = 1.0;
  const int n = 8192;
  for (int i = 0; i < n; ++i) {
    double t = -pi + two_pi * (i + 0.5) / n;
    if (is_corner(curve, t)) continue;
    double m = std::abs(curve.radius_deriv(t)) / curve.radius(t);
    k = std::max(k, 0.5 * m + std::sqrt(1.0 + 0.25 * m * m));
  }
  return k;
}

}  // namespace wmfs
