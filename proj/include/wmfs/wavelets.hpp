#pragma once

#include <Eigen/Dense>

#include "wmfs/geometry.hpp"
#include "wmfs/whitney.hpp"

namespace wmfs {

/// Which trace operator the boundary system discretizes:
/// neumann takes T f = Re(nu f), dirichlet_regularity takes T f = Re(tau f).
enum class TraceKind { neumann, dirichlet_regularity };

/// Lusin wavelets psi_j(w) = b_j (w - q_j)^-(k+1) with b_j > 0 chosen so
/// each wavelet has unit L2(gamma) norm.
struct WaveletFamily {
  SourceSet sources;
  int order = 1;          // k >= 1
  std::vector<double> b;  // one positive constant per source
  std::size_t size() const { return sources.size(); }
};

/// Computes the normalization constants b_j = (int |w-q_j|^-(2k+2) |dw|)^-1/2
/// by corner-split adaptive quadrature seeded with a geometric subdivision
/// around the boundary point closest to q_j.
WaveletFamily normalize(const SourceSet& sources, const BoundaryCurve& curve,
                        int order);

/// psi_j evaluated off the source; throws std::domain_error at the pole.
cplx wavelet_value(const WaveletFamily& family, std::size_t j, cplx z);

/// Exact inner product of a real wavelet against the indicator of the
/// boundary piece from w_start to w_end, via the primitive of psi_j:
///   neumann:   (phi_j, chi)  = (b_j/k) Im[(w0-q)^-k - (w1-q)^-k]
///              (phi_-j, chi) = (b_j/k) Re[(w0-q)^-k - (w1-q)^-k]
/// and with Re / -Im exchanged for the Dirichlet-regularity trace.
/// companion=false selects phi_j = T psi_j, companion=true phi_-j = T(i psi_j).
double element_inner_product(const WaveletFamily& family, std::size_t j,
                             cplx w_start, cplx w_end, TraceKind trace,
                             bool companion);

/// Hermitian Gram matrix (psi_i, psi_j)_{L2(gamma)} by adaptive quadrature;
/// positive definite for pairwise distinct sources.
Eigen::MatrixXcd independence_gram(const WaveletFamily& family,
                                   const BoundaryCurve& curve);

/// Breakpoint list for integrating a function of theta peaked near
/// theta_star at angular scale h: corners plus a dyadic zoom toward the
/// peak over one period centered there. Shared by normalize and the
/// quadrature oracles in the tests.
std::vector<double> peak_breakpoints(const BoundaryCurve& curve,
                                     double theta_star, double h);

}  // namespace wmfs
