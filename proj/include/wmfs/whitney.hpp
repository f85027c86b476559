#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wmfs/geometry.hpp"
#include "wmfs/util.hpp"

namespace wmfs {

enum class SourceTag { layer, cone, ring };

struct SourcePoint {
  cplx point;
  int layer = 0;     // layer index, cone level, or 0 for a ring
  SourceTag tag = SourceTag::layer;
  int cone_id = 0;   // which cone emitted the point
};

struct SourceSet {
  std::vector<SourcePoint> points;
  double eps = 0.0;  // fineness parameter of the construction
  std::size_t size() const { return points.size(); }
};

std::string to_string(SourceTag tag);

/// Exterior Whitney layers l = n0..n:
///   q_{j,l} = (1 + (1+eps)^-l) r(theta_{j,l}) e^{i theta_{j,l}},
///   theta_{j,l} = -pi + 2 pi j / n_l,  n_l = ceil(2 pi / eps (1+(1+eps)^l)).
SourceSet whitney_layers(const BoundaryCurve& curve, double eps, int n0, int n);

/// Interior mirror with radial factor 1 - (1+eps)^-l, layers l >= 1.
SourceSet interior_whitney_layers(const BoundaryCurve& curve, double eps,
                                  int n0, int n);

/// Cone of sources accumulating geometrically at a boundary point, used to
/// resolve a boundary singularity. Levels m = 1..levels sit at radius
/// rho_m = rho0 decay^-m from the apex on an arc of half-angle half_angle
/// about the outward normal (outward bisector at a corner apex), with
/// points spaced eps * rho_m along the arc. Points whose distance to the
/// curve falls below clearance * rho_m are dropped.
struct ConeSpec {
  double apex_theta = 0.0;
  int levels = 0;
  double half_angle = pi / 3.0;
  double rho0 = 1.0;
  double decay = 0.0;        // level radius ratio; 0: 1 + eps
  int points_per_level = 0;  // 0: ceil(2 half_angle / eps)
  double clearance = 0.2;
};

SourceSet cone_points(const BoundaryCurve& curve, const ConeSpec& spec,
                      double eps, int cone_id = 0);

/// Classical MFS ring: q_j = r_mfs r(2 pi j / count) e^{2 pi i j / count}.
SourceSet mfs_ring(const BoundaryCurve& curve, int count, double r_mfs);

SourceSet merge(SourceSet a, const SourceSet& b);

struct CoverReport {
  bool covered = false;
  int n_estimate = 0;       // max overlap count = covering constant estimate
  int uncovered = 0;        // samples not inside any ball
  int samples = 0;          // accepted sample count
  double eps_prime = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double source_dist_min = 0.0;
  double source_dist_max = 0.0;
};

/// Monte-Carlo check that the balls B(q_j, eps_prime d(q_j)) cover the
/// exterior band {min_j d(q_j) <= d(z) <= band}. band <= 0 selects
/// max_j d(q_j), the distance of the outermost layer; the lower edge is
/// the innermost layer, since a truncated set cannot reach below its
/// deepest shell. Seeded and deterministic for any thread count.
CoverReport verify_cover(const SourceSet& set, const BoundaryCurve& curve,
                         double eps_prime, double band = 0.0,
                         int samples = 100000, std::uint64_t seed = 20240901);

}  // namespace wmfs
