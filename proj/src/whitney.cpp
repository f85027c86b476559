#include "wmfs/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wmfs {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("whitney: eps must lie in (0, 1]");
}

int layer_count(double eps, int l) {
  return static_cast<int>(std::ceil(two_pi / eps * (1.0 + std::pow(1.0 + eps, l))));
}

SourceSet layers_impl(const BoundaryCurve& curve, double eps, int n0, int n,
                      bool interior) {
  check_eps(eps);
  if (n0 > n) throw std::invalid_argument("whitney: layer range empty (n0 > n)");
  if (interior && n0 < 1)
    throw std::invalid_argument("whitney: interior layers start at l = 1");
  if (!interior && n0 < 0)
    throw std::invalid_argument("whitney: exterior layers start at l >= 0");
  SourceSet set;
  set.eps = eps;
  for (int l = n0; l <= n; ++l) {
    double factor = interior ? 1.0 - std::pow(1.0 + eps, -l)
                             : 1.0 + std::pow(1.0 + eps, -l);
    int nl = layer_count(eps, l);
    for (int j = 1; j <= nl; ++j) {
      double theta = -pi + two_pi * j / nl;
      cplx q = factor * curve.radius(theta) * cplx(std::cos(theta), std::sin(theta));
      set.points.push_back({q, l, SourceTag::layer, 0});
    }
  }
  return set;
}

}  // namespace

std::string to_string(SourceTag tag) {
  switch (tag) {
    case SourceTag::layer: return "layer";
    case SourceTag::cone: return "cone";
    case SourceTag::ring: return "ring";
  }
  return "?";
}

SourceSet whitney_layers(const BoundaryCurve& curve, double eps, int n0, int n) {
  return layers_impl(curve, eps, n0, n, false);
}

SourceSet interior_whitney_layers(const BoundaryCurve& curve, double eps,
                                  int n0, int n) {
  return layers_impl(curve, eps, n0, n, true);
}

SourceSet cone_points(const BoundaryCurve& curve, const ConeSpec& spec,
                      double eps, int cone_id) {
  check_eps(eps);
  if (spec.levels < 0) throw std::invalid_argument("cone_points: negative level count");
  if (!(spec.half_angle > 0.0) || spec.half_angle > pi / 2.0)
    throw std::invalid_argument("cone_points: half_angle must lie in (0, pi/2]");
  if (!(spec.rho0 > 0.0)) throw std::invalid_argument("cone_points: rho0 must be positive");
  if (spec.decay < 0.0 || (spec.decay > 0.0 && spec.decay <= 1.0))
    throw std::invalid_argument("cone_points: decay must exceed 1");

  cplx apex = position_at(curve, spec.apex_theta);
  cplx axis;
  if (is_corner(curve, spec.apex_theta)) {
    // Outward bisector from the one-sided normals.
    cplx nl = point_at(curve, spec.apex_theta - 1e-7).normal;
    cplx nr = point_at(curve, spec.apex_theta + 1e-7).normal;
    axis = nl + nr;
    axis /= std::abs(axis);
  } else {
    axis = point_at(curve, spec.apex_theta).normal;
  }
  double axis_angle = std::arg(axis);

  int per_level = spec.points_per_level > 0
                      ? spec.points_per_level
                      : static_cast<int>(std::ceil(2.0 * spec.half_angle / eps));
  double decay = spec.decay > 0.0 ? spec.decay : 1.0 + eps;
  SourceSet set;
  set.eps = eps;
  for (int m = 1; m <= spec.levels; ++m) {
    double rho = spec.rho0 * std::pow(decay, -m);
    for (int i = 1; i <= per_level; ++i) {
      double phi = -spec.half_angle +
                   2.0 * spec.half_angle * (i - 0.5) / per_level;
      double ang = axis_angle + phi;
      cplx q = apex + rho * cplx(std::cos(ang), std::sin(ang));
      if (inside_domain(curve, q, 0.0)) continue;
      if (distance_to_curve(curve, q) < spec.clearance * rho) continue;
      set.points.push_back({q, m, SourceTag::cone, cone_id});
    }
  }
  return set;
}

SourceSet mfs_ring(const BoundaryCurve& curve, int count, double r_mfs) {
  if (count < 1) throw std::invalid_argument("mfs_ring: count must be positive");
  if (!(r_mfs > 1.0)) throw std::invalid_argument("mfs_ring: r_mfs must exceed 1");
  SourceSet set;
  set.eps = 0.0;
  for (int j = 1; j <= count; ++j) {
    double theta = two_pi * j / count;
    cplx q = r_mfs * curve.radius(theta) * cplx(std::cos(theta), std::sin(theta));
    set.points.push_back({q, 0, SourceTag::ring, 0});
  }
  return set;
}

SourceSet merge(SourceSet a, const SourceSet& b) {
  if (a.eps == 0.0) a.eps = b.eps;
  a.points.insert(a.points.end(), b.points.begin(), b.points.end());
  return a;
}

namespace {

// Dense polyline distance, cheap enough for Monte-Carlo band membership.
struct Polyline {
  std::vector<cplx> pts;

  explicit Polyline(const BoundaryCurve& curve, int n = 8192) {
    std::vector<double> angles;
    angles.reserve(n + curve.corners.size());
    for (int i = 0; i < n; ++i) angles.push_back(-pi + two_pi * i / n);
    for (double c : curve.corners) angles.push_back(c);
    std::sort(angles.begin(), angles.end());
    pts.reserve(angles.size());
    for (double t : angles) pts.push_back(position_at(curve, t));
  }

  double distance(cplx z) const {
    double best = std::numeric_limits<double>::max();
    std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      cplx a = pts[i], b = pts[(i + 1) % m];
      cplx ab = b - a, az = z - a;
      double len2 = std::norm(ab);
      double t = len2 > 0.0
                     ? std::clamp((az.real() * ab.real() + az.imag() * ab.imag()) / len2, 0.0, 1.0)
                     : 0.0;
      best = std::min(best, std::norm(az - t * ab));
    }
    return std::sqrt(best);
  }
};

}  // namespace

CoverReport verify_cover(const SourceSet& set, const BoundaryCurve& curve,
                         double eps_prime, double band, int samples,
                         std::uint64_t seed) {
  if (set.points.empty()) throw std::invalid_argument("verify_cover: empty source set");
  if (!(eps_prime > 0.0) || eps_prime >= 1.0)
    throw std::invalid_argument("verify_cover: eps_prime must lie in (0, 1)");
  if (samples < 1) throw std::invalid_argument("verify_cover: need at least one sample");

  std::size_t ns = set.points.size();
  std::vector<double> dist(ns);
  parallel_for(ns, [&](std::size_t j) {
    dist[j] = distance_to_curve(curve, set.points[j].point);
  });
  double dmin = *std::min_element(dist.begin(), dist.end());
  double dmax = *std::max_element(dist.begin(), dist.end());
  if (dmin <= 0.0) throw std::invalid_argument("verify_cover: source on the curve");

  CoverReport report;
  report.eps_prime = eps_prime;
  // A truncated layer set only covers down to its innermost shell: the
  // sliver below dmin would need the next (absent) layer, so the checked
  // band is [dmin, dmax] rather than extending a ball radius further in.
  report.band_lo = dmin;
  report.band_hi = band > 0.0 ? band : dmax;
  report.source_dist_min = dmin;
  report.source_dist_max = dmax;
  if (report.band_hi <= report.band_lo)
    throw std::invalid_argument("verify_cover: empty sampling band");

  Polyline poly(curve);
  double rmin = std::numeric_limits<double>::max();
  for (int i = 0; i < 4096; ++i)
    rmin = std::min(rmin, curve.radius(-pi + two_pi * i / 4096));
  // Envelope for rejection sampling: a point at curve distance d sits at
  // polar stretch s <= 1 + d sqrt(1 + m^2) / rmin <= 1 + d K^2 / rmin.
  double lip = std::min(lipschitz_constant(curve), 10.0);
  double smax = 1.0 + 1.5 * lip * lip * report.band_hi / rmin;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  int accepted = 0, uncovered = 0, overlap_max = 0;
  long budget = 200L * samples;
  std::vector<cplx> cand;
  std::vector<int> counts;
  while (accepted < samples && budget > 0) {
    std::size_t round = std::min<long>(2L * (samples - accepted) + 64, budget);
    cand.resize(round);
    for (std::size_t i = 0; i < round; ++i) {
      double theta = -pi + two_pi * u01(rng);
      double s = 1.0 + (smax - 1.0) * u01(rng);
      cand[i] = s * curve.radius(theta) * cplx(std::cos(theta), std::sin(theta));
    }
    counts.assign(round, -1);
    parallel_for(round, [&](std::size_t i) {
      double d = poly.distance(cand[i]);
      if (d < report.band_lo || d > report.band_hi) return;
      int c = 0;
      for (std::size_t j = 0; j < ns; ++j)
        if (std::abs(cand[i] - set.points[j].point) < eps_prime * dist[j]) ++c;
      counts[i] = c;
    });
    for (std::size_t i = 0; i < round && accepted < samples; ++i) {
      if (counts[i] < 0) continue;
      ++accepted;
      if (counts[i] == 0) ++uncovered;
      overlap_max = std::max(overlap_max, counts[i]);
    }
    budget -= round;
  }
  if (accepted < samples)
    throw std::runtime_error("verify_cover: sampling budget exhausted; band too thin?");

  report.samples = accepted;
  report.uncovered = uncovered;
  report.n_estimate = overlap_max;
  report.covered = uncovered == 0;
  return report;
}

}  // namespace wmfs
