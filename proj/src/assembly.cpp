#include "wmfs/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmfs {

namespace {

constexpr double kDedupTol = 1e-12;

}  // namespace

BoundaryMesh adapted_boundary_points(const SourceSet& sources,
                                     const BoundaryCurve& curve, int m0,
                                     const std::vector<double>& forced) {
  if (m0 < 1) throw std::invalid_argument("adapted_boundary_points: m0 must be >= 1");
  if (sources.points.empty())
    throw std::invalid_argument("adapted_boundary_points: empty source set");

  // priority 1 marks corner/forced angles so dedup keeps them exactly.
  std::vector<std::pair<double, int>> raw;
  raw.reserve(sources.size() * m0 + curve.corners.size() + forced.size());
  for (const auto& sp : sources.points) {
    double theta = std::arg(sp.point);
    double r = std::abs(sp.point) / curve.radius(theta);
    double span = r - 1.0;
    if (m0 % 2 == 1) {
      raw.emplace_back(wrap_angle(theta), 0);
      int half = (m0 - 1) / 2;
      for (int i = 1; i <= half; ++i) {
        raw.emplace_back(wrap_angle(theta + span * i / half), 0);
        raw.emplace_back(wrap_angle(theta - span * i / half), 0);
      }
    } else {
      int half = m0 / 2;
      for (int i = 1; i <= half; ++i) {
        raw.emplace_back(wrap_angle(theta + span * i / half), 0);
        raw.emplace_back(wrap_angle(theta - span * i / half), 0);
      }
    }
  }
  for (double c : curve.corners) raw.emplace_back(wrap_angle(c), 1);
  for (double f : forced) raw.emplace_back(wrap_angle(f), 1);

  std::sort(raw.begin(), raw.end());

  BoundaryMesh mesh;
  mesh.m0 = m0;
  mesh.raw_count = static_cast<int>(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    double rep = raw[i].first;
    int pri = raw[i].second;
    while (j + 1 < raw.size() && raw[j + 1].first - raw[i].first < kDedupTol) {
      ++j;
      if (raw[j].second > pri) {
        rep = raw[j].first;
        pri = raw[j].second;
      }
    }
    mesh.angles.push_back(rep);
    mesh.duplicates_removed += static_cast<int>(j - i);
    i = j + 1;
  }
  // Merge across the +-pi seam.
  while (mesh.angles.size() > 1 &&
         mesh.angles.front() + two_pi - mesh.angles.back() < kDedupTol) {
    mesh.angles.pop_back();
    ++mesh.duplicates_removed;
  }
  if (mesh.angles.size() < 2)
    throw std::invalid_argument("adapted_boundary_points: fewer than two distinct angles");

  std::size_t m = mesh.angles.size();
  mesh.segments.reserve(m);
  mesh.segments.push_back({mesh.angles.back() - two_pi, mesh.angles.front()});
  for (std::size_t i = 1; i < m; ++i)
    mesh.segments.push_back({mesh.angles[i - 1], mesh.angles[i]});
  return mesh;
}

BoundarySystem assemble(const WaveletFamily& family, const BoundaryCurve& curve,
                        const BoundaryMesh& mesh, TraceKind trace,
                        const BoundaryData& g) {
  std::size_t sn = family.size();
  std::size_t rows = mesh.segments.size();
  if (sn == 0) throw std::invalid_argument("assemble: empty wavelet family");
  if (family.b.size() != sn) throw std::invalid_argument("assemble: family not normalized");

  BoundarySystem sys;
  sys.matrix.resize(rows, 2 * sn);
  sys.rhs.resize(rows);
  sys.s_n = sn;
  sys.m0 = mesh.m0;
  sys.nominal_rows = mesh.m0 * static_cast<int>(sn);
  sys.duplicates_removed = mesh.duplicates_removed;
  sys.trace = trace;

  parallel_for(rows, [&](std::size_t m) {
    const Segment& seg = mesh.segments[m];
    cplx w0 = position_at(curve, seg.theta_start);
    cplx w1 = position_at(curve, seg.theta_end);
    for (std::size_t j = 0; j < sn; ++j) {
      sys.matrix(m, j) = element_inner_product(family, j, w0, w1, trace, false);
      sys.matrix(m, sn + j) = element_inner_product(family, j, w0, w1, trace, true);
    }
    sys.rhs(m) = integrate_data(curve, seg, g);
  });

  if (!sys.matrix.allFinite() || !sys.rhs.allFinite())
    throw std::runtime_error("assemble: non-finite entry in the boundary system");
  return sys;
}

}  // namespace wmfs
