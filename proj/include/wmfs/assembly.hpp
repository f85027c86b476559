#pragma once

#include <Eigen/Dense>

#include "wmfs/quadrature.hpp"
#include "wmfs/wavelets.hpp"

namespace wmfs {

/// Partition of gamma into M corner-free segments delimited by the adapted
/// boundary points. angles are strictly ascending in [-pi, pi); segment 0
/// wraps through +-pi so the segments tile gamma exactly once.
struct BoundaryMesh {
  std::vector<double> angles;
  std::vector<Segment> segments;
  int m0 = 0;                  // fan size the mesh was built with
  int raw_count = 0;           // angles before dedup
  int duplicates_removed = 0;  // merged within 1e-12
};

/// Boundary points adapted to the sources: writing q_j = r_j r(theta_j)
/// e^{i theta_j}, each source spreads m0 angles across theta_j with offsets
/// up to +-(r_j - 1) (the pattern of Section 5's w-point fans). Corner
/// angles of the curve and any forced angles are always included.
BoundaryMesh adapted_boundary_points(const SourceSet& sources,
                                     const BoundaryCurve& curve, int m0,
                                     const std::vector<double>& forced = {});

struct BoundarySystem {
  Eigen::MatrixXd matrix;  // M x 2 s_N, columns [phi_1..phi_sN, phi_-1..phi_-sN]
  Eigen::VectorXd rhs;     // (g, chi_m), single 10-point panel per segment
  std::size_t s_n = 0;
  int m0 = 0;
  int nominal_rows = 0;  // m0 * s_N, the count before forcing and dedup
  int duplicates_removed = 0;
  TraceKind trace = TraceKind::neumann;
};

BoundarySystem assemble(const WaveletFamily& family, const BoundaryCurve& curve,
                        const BoundaryMesh& mesh, TraceKind trace,
                        const BoundaryData& g);

}  // namespace wmfs
