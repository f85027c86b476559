#include "wmfs/field.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace wmfs {

ReferenceSolution reference_from_expansion(Expansion expansion,
                                           WaveletFamily family) {
  auto exp = std::make_shared<Expansion>(std::move(expansion));
  auto fam = std::make_shared<WaveletFamily>(std::move(family));
  ReferenceSolution ref;
  ref.f = [exp, fam](cplx z) { return eval_f(*exp, *fam, z); };
  ref.u = [exp, fam](cplx z) { return eval_u(*exp, *fam, z); };
  return ref;
}

cplx eval_f(const Expansion& expansion, const WaveletFamily& family, cplx z) {
  std::size_t sn = family.size();
  if (expansion.s_n() != sn)
    throw std::invalid_argument("eval_f: expansion and family sizes differ");
  int p = family.order + 1;
  cplx sum = 0.0;
  for (std::size_t j = 0; j < sn; ++j) {
    cplx dz = z - family.sources.points[j].point;
    sum += expansion.coeff(j) * family.b[j] * ipow(dz, -p);
  }
  return sum;
}

double eval_u(const Expansion& expansion, const WaveletFamily& family, cplx z,
              double calibration) {
  std::size_t sn = family.size();
  if (expansion.s_n() != sn)
    throw std::invalid_argument("eval_u: expansion and family sizes differ");
  int k = family.order;
  cplx sum = 0.0;
  for (std::size_t j = 0; j < sn; ++j) {
    cplx dz = z - family.sources.points[j].point;
    sum += expansion.coeff(j) * family.b[j] * ipow(dz, -k);
  }
  return (-sum / static_cast<double>(k)).real() + calibration;
}

double calibrate_u(const Expansion& expansion, const WaveletFamily& family,
                   const BoundaryCurve& curve,
                   const std::function<double(cplx)>& u_exact) {
  if (!u_exact) throw std::invalid_argument("calibrate_u: missing exact potential");
  BoundingBox box = bounding_box(curve);
  double cx = 0.5 * (box.xmin + box.xmax), cy = 0.5 * (box.ymin + box.ymax);
  double hx = 0.25 * (box.xmax - box.xmin), hy = 0.25 * (box.ymax - box.ymin);
  const int n = 200;
  std::vector<double> diff(static_cast<std::size_t>(n) * n,
                           std::numeric_limits<double>::quiet_NaN());
  parallel_for(n, [&](std::size_t iy) {
    double y = cy - hy + 2.0 * hy * iy / (n - 1);
    for (int ix = 0; ix < n; ++ix) {
      double x = cx - hx + 2.0 * hx * ix / (n - 1);
      cplx z(x, y);
      if (!inside_domain(curve, z)) continue;
      diff[iy * n + ix] = u_exact(z) - eval_u(expansion, family, z);
    }
  });
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : diff)
    if (!std::isnan(v)) {
      sum += v;
      ++count;
    }
  if (count == 0) throw std::runtime_error("calibrate_u: no in-domain grid nodes");
  return sum / count;
}

ErrorReport error_grid(const BoundaryCurve& curve, int resolution,
                       const std::function<cplx(cplx)>& approx,
                       const std::function<cplx(cplx)>& exact) {
  if (resolution < 2) throw std::invalid_argument("error_grid: resolution must be >= 2");
  BoundingBox box = bounding_box(curve);
  double dx = (box.xmax - box.xmin) / (resolution - 1);
  double dy = (box.ymax - box.ymin) / (resolution - 1);

  std::size_t res = resolution;
  std::vector<double> cell(res * res, std::numeric_limits<double>::quiet_NaN());
  parallel_for(res, [&](std::size_t iy) {
    double y = box.ymin + dy * iy;
    for (std::size_t ix = 0; ix < res; ++ix) {
      cplx z(box.xmin + dx * ix, y);
      if (!inside_domain(curve, z)) continue;
      cell[iy * res + ix] = std::abs(approx(z) - exact(z));
    }
  });

  ErrorReport report;
  report.resolution = resolution;
  double sq = 0.0;
  for (std::size_t iy = 0; iy < res; ++iy)
    for (std::size_t ix = 0; ix < res; ++ix) {
      double e = cell[iy * res + ix];
      if (std::isnan(e)) continue;
      report.linf = std::max(report.linf, e);
      sq += e * e;
      report.xs.push_back(box.xmin + dx * ix);
      report.ys.push_back(box.ymin + dy * iy);
      report.err.push_back(e);
      ++report.nodes;
    }
  report.l2 = std::sqrt(sq * dx * dy);
  return report;
}

ErrorReport error_grid_f(const Expansion& expansion, const WaveletFamily& family,
                         const ReferenceSolution& ref, const BoundaryCurve& curve,
                         int resolution) {
  if (!ref.f) throw std::invalid_argument("error_grid_f: reference has no field");
  return error_grid(
      curve, resolution,
      [&](cplx z) { return eval_f(expansion, family, z); }, ref.f);
}

ErrorReport error_grid_u(const Expansion& expansion, const WaveletFamily& family,
                         const ReferenceSolution& ref, const BoundaryCurve& curve,
                         int resolution, double calibration) {
  if (!ref.u) throw std::invalid_argument("error_grid_u: reference has no potential");
  return error_grid(
      curve, resolution,
      [&](cplx z) { return cplx(eval_u(expansion, family, z, calibration), 0.0); },
      [&](cplx z) { return cplx(ref.u(z), 0.0); });
}

}  // namespace wmfs
