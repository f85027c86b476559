#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "wmfs/assembly.hpp"
#include "wmfs/quadrature.hpp"
#include "wmfs/wavelets.hpp"
#include "wmfs/whitney.hpp"

using namespace wmfs;

namespace {

// Independent normalization oracle on a corner-free curve: periodic
// trapezoid sum of |w - q|^-(2k+2) |w'|, spectrally accurate for smooth
// integrands, so entirely unrelated to the adaptive panels of normalize().
double trapezoid_b(const BoundaryCurve& curve, cplx q, int order, int n) {
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = -pi + two_pi * i / n;
    cplx w = position_at(curve, t);
    mass += std::pow(std::abs(w - q), -2.0 * (order + 1)) *
            arclength_jacobian(curve, t);
  }
  mass *= two_pi / n;
  return 1.0 / std::sqrt(mass);
}

// Piecewise-Simpson oracle for curves with corners: composite Simpson on
// each side, with endpoint samples nudged off the corners where the
// jacobian is discontinuous.
double simpson_b(const BoundaryCurve& curve, cplx q, int order, int per_side) {
  auto f = [&](double t) {
    t = wrap_angle(t);
    cplx w = position_at(curve, t);
    return std::pow(std::abs(w - q), -2.0 * (order + 1)) *
           arclength_jacobian(curve, t);
  };
  std::vector<double> breaks = curve.corners;
  breaks.push_back(curve.corners.front() + two_pi);
  double mass = 0.0;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    double a = breaks[s] + 1e-12, b = breaks[s + 1] - 1e-12;
    double h = (b - a) / per_side;
    for (int i = 0; i < per_side; ++i) {
      double x0 = a + i * h;
      mass += (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h)) / 6.0 * h;
    }
  }
  return 1.0 / std::sqrt(mass);
}

}  // namespace

TEST_CASE("normalization constants match the trapezoid oracle (smooth curves)") {
  BoundaryCurve circ = circle_curve();
  BoundaryCurve star = star_curve();

  SourceSet set;
  set.eps = 0.3;
  set.points.push_back({cplx(1.5, 0.0), 0, SourceTag::layer, 0});
  WaveletFamily fam = normalize(set, circ, 1);
  CHECK(fam.b[0] ==
        doctest::Approx(trapezoid_b(circ, cplx(1.5, 0.0), 1, 2000000)).epsilon(1e-9));

  SourceSet sset = whitney_layers(star, 0.3, 0, 0);
  WaveletFamily sfam = normalize(sset, star, 1);
  for (std::size_t j : {std::size_t{0}, std::size_t{11}, std::size_t{23}}) {
    double oracle = trapezoid_b(star, sset.points[j].point, 1, 2000000);
    CHECK(sfam.b[j] == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("normalization constants match the Simpson oracle (square)") {
  BoundaryCurve sq = square_curve();
  SourceSet set;
  set.eps = 0.3;
  set.points.push_back({cplx(1.7, 0.4), 0, SourceTag::layer, 0});
  set.points.push_back({cplx(1.4, 1.4), 0, SourceTag::cone, 0});
  WaveletFamily fam = normalize(set, sq, 1);
  for (std::size_t j = 0; j < set.size(); ++j) {
    double oracle = simpson_b(sq, set.points[j].point, 1, 400000);
    CHECK(fam.b[j] == doctest::Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("wavelets have unit L2 norm, including deep cone sources") {
  BoundaryCurve sq = square_curve();
  ConeSpec spec;
  spec.apex_theta = pi / 4.0;
  spec.levels = 10;
  spec.points_per_level = 1;
  SourceSet set = cone_points(sq, spec, 0.3);
  set = merge(std::move(set), whitney_layers(sq, 0.3, 0, 0));
  WaveletFamily fam = normalize(set, sq, 1);
  Eigen::MatrixXcd gram = independence_gram(fam, sq);
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    CHECK(gram(i, i).real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("wavelet_value is the normalized kernel and throws at the pole") {
  BoundaryCurve circ = circle_curve();
  SourceSet set;
  set.eps = 0.3;
  cplx q(1.5, 0.5);
  set.points.push_back({q, 0, SourceTag::layer, 0});
  WaveletFamily fam = normalize(set, circ, 1);
  cplx z(0.3, -0.2);
  CHECK(std::abs(wavelet_value(fam, 0, z) - fam.b[0] / ((z - q) * (z - q))) <
        1e-15);
  CHECK_THROWS_AS((void)wavelet_value(fam, 0, q), std::domain_error);
}

TEST_CASE("analytic element integrals match refined quadrature") {
  BoundaryCurve star = star_curve();
  SourceSet set = whitney_layers(star, 0.3, 0, 1);
  WaveletFamily fam = normalize(set, star, 1);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ang(-pi, pi - 0.4), len(0.05, 0.35);
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);

  for (int trial = 0; trial < 100; ++trial) {
    std::size_t j = pick(rng);
    double a = ang(rng), b = a + len(rng);
    TraceKind trace = trial % 2 ? TraceKind::neumann : TraceKind::dirichlet_regularity;
    bool companion = (trial / 2) % 2;

    double got = element_inner_product(fam, j, position_at(star, a),
                                       position_at(star, b), trace, companion);
    double oracle = adaptive_integrate(
        [&](double t) {
          BoundaryPoint bp = point_at(star, t);
          cplx dir = trace == TraceKind::neumann ? bp.normal : bp.tangent;
          cplx psi = wavelet_value(fam, j, bp.position);
          if (companion) psi *= cplx(0.0, 1.0);
          return (dir * psi).real() * arclength_jacobian(star, t);
        },
        {a, 0.5 * (a + b), b}, 1e-12);
    CHECK(std::abs(got - oracle) <= 1e-10 * (1.0 + std::abs(got)));
  }
}

TEST_CASE("trace kinds are quarter-turn rotations of each other") {
  // T_dirichlet psi = Re(tau psi) and tau = i nu, so phi^D_j = phi^N_-j and
  // phi^D_-j = -phi^N_j elementwise.
  BoundaryCurve star = star_curve();
  SourceSet set = whitney_layers(star, 0.3, 0, 0);
  WaveletFamily fam = normalize(set, star, 1);
  cplx w0 = position_at(star, 0.3), w1 = position_at(star, 0.8);
  for (std::size_t j : {std::size_t{2}, std::size_t{17}}) {
    double nj = element_inner_product(fam, j, w0, w1, TraceKind::neumann, false);
    double nc = element_inner_product(fam, j, w0, w1, TraceKind::neumann, true);
    double dj = element_inner_product(fam, j, w0, w1,
                                      TraceKind::dirichlet_regularity, false);
    double dc = element_inner_product(fam, j, w0, w1,
                                      TraceKind::dirichlet_regularity, true);
    CHECK(std::abs(dj - nc) <= 1e-14);
    CHECK(std::abs(dc + nj) <= 1e-14);
  }
}

TEST_CASE("element integrals telescope to zero around the closed curve") {
  BoundaryCurve sq = square_curve();
  SourceSet set = whitney_layers(sq, 0.3, 0, 0);
  WaveletFamily fam = normalize(set, sq, 1);
  BoundaryMesh mesh = adapted_boundary_points(set, sq, 3);
  for (std::size_t j : {std::size_t{0}, std::size_t{20}, std::size_t{41}}) {
    for (bool companion : {false, true}) {
      double sum = 0.0;
      for (const auto& seg : mesh.segments)
        sum += element_inner_product(fam, j, position_at(sq, seg.theta_start),
                                     position_at(sq, seg.theta_end),
                                     TraceKind::neumann, companion);
      CHECK(std::abs(sum) <= 1e-11);
    }
  }
}

TEST_CASE("element_inner_product rejects endpoints at the source") {
  BoundaryCurve circ = circle_curve();
  SourceSet set;
  set.eps = 0.3;
  set.points.push_back({cplx(2.0, 0.0), 0, SourceTag::layer, 0});
  WaveletFamily fam = normalize(set, circ, 1);
  CHECK_THROWS_AS((void)element_inner_product(fam, 0, cplx(2.0, 0.0), cplx(0.0, 1.0),
                                              TraceKind::neumann, false),
                  std::domain_error);
}

TEST_CASE("peak_breakpoints cover one period, densely near the peak") {
  BoundaryCurve sq = square_curve();
  std::vector<double> br = peak_breakpoints(sq, 0.3, 1e-4);
  REQUIRE(br.size() >= 4);
  CHECK(std::is_sorted(br.begin(), br.end()));
  CHECK(br.back() - br.front() == doctest::Approx(two_pi).epsilon(1e-12));
  // the two breakpoints bracketing the peak are at scale h
  double below = -1e9, above = 1e9;
  for (double t : br) {
    if (t < 0.3 && t > below) below = t;
    if (t > 0.3 && t < above) above = t;
  }
  CHECK(above - below <= 3e-4);
}

TEST_CASE("gram matrix of distinct wavelets is positive definite") {
  BoundaryCurve star = star_curve();

  // Well-separated sources: the smallest eigenvalue is genuinely
  // observable and strictly positive with a wide margin.
  for (int count : {8, 16, 32}) {
    SourceSet ring = mfs_ring(star, count, 1.5);
    WaveletFamily rfam = normalize(ring, star, 1);
    Eigen::MatrixXcd rg = independence_gram(rfam, star);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> res(rg);
    CHECK(res.eigenvalues().minCoeff() > 1e-6);
  }

  // A packed layer set: the true gram is still positive definite, but its
  // smallest eigenvalue collapses exponentially with the source count (the
  // ill-conditioning that motivates the minimum-norm solve) and falls below
  // the quadrature tolerance of the entries, so the computed spectrum is
  // only nonnegative up to that noise floor.
  SourceSet set = whitney_layers(star, 0.3, 0, 1);  // 91 sources
  WaveletFamily fam = normalize(set, star, 1);
  Eigen::MatrixXcd gram = independence_gram(fam, star);
  REQUIRE(gram.rows() == 91);
  CHECK((gram - gram.adjoint()).norm() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  CHECK(es.eigenvalues().minCoeff() > -1e-9);
  CHECK(es.eigenvalues().maxCoeff() > 1.0);

  SourceSet dup = set;
  dup.points.push_back(set.points[5]);
  WaveletFamily dfam = normalize(dup, star, 1);
  CHECK_THROWS_AS((void)independence_gram(dfam, star), std::invalid_argument);
}
