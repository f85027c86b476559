#pragma once

#include <functional>
#include <optional>

#include "wmfs/solver.hpp"

namespace wmfs {

/// Reference against which a computed solution is measured: closed forms
/// when known, or fields induced by a stored expansion.
struct ReferenceSolution {
  std::function<cplx(cplx)> f;    // derivative pair (u_x - i u_y)
  std::function<double(cplx)> u;  // potential, may be empty
};

ReferenceSolution reference_from_expansion(Expansion expansion,
                                           WaveletFamily family);

/// f(z) = sum_j (d_j + i d_-j) psi_j(z), valid strictly inside the domain.
cplx eval_f(const Expansion& expansion, const WaveletFamily& family, cplx z);

/// Harmonic potential via the primitive of each wavelet:
/// u(z) = Re(-(1/k) sum_j b_j (d_j + i d_-j)(z - q_j)^-k) + calibration.
double eval_u(const Expansion& expansion, const WaveletFamily& family, cplx z,
              double calibration = 0.0);

/// Additive constant aligning eval_u with u_exact: the mean difference over
/// in-domain nodes of a 200x200 grid on the curve's bounding box shrunk by
/// half about its center.
double calibrate_u(const Expansion& expansion, const WaveletFamily& family,
                   const BoundaryCurve& curve,
                   const std::function<double(cplx)>& u_exact);

struct ErrorReport {
  double linf = 0.0;
  double l2 = 0.0;  // sqrt(sum |e|^2 * cell_area) over in-domain nodes
  std::size_t nodes = 0;
  int resolution = 0;
  std::vector<double> xs, ys, err;  // per in-domain node, row-major order
};

/// Pointwise error |approx - exact| over the resolution^2 grid on the
/// curve's bounding box, restricted to in-domain nodes. Rows evaluate in
/// parallel; the reduction is a fixed serial pass, so reports are identical
/// for any thread count.
ErrorReport error_grid(const BoundaryCurve& curve, int resolution,
                       const std::function<cplx(cplx)>& approx,
                       const std::function<cplx(cplx)>& exact);

/// Convenience wrappers comparing a solved expansion against a reference.
ErrorReport error_grid_f(const Expansion& expansion, const WaveletFamily& family,
                         const ReferenceSolution& ref, const BoundaryCurve& curve,
                         int resolution);

ErrorReport error_grid_u(const Expansion& expansion, const WaveletFamily& family,
                         const ReferenceSolution& ref, const BoundaryCurve& curve,
                         int resolution, double calibration);

}  // namespace wmfs
