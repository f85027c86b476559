#include "wmfs/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

namespace wmfs {

namespace {

GaussRule build_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: order must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(pi * (i - 0.25) / (n + 0.5));
    double pd = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pd = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pd;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - i] = x;
    rule.weights[n - i] = 2.0 / ((1.0 - x * x) * pd * pd);
  }
  return rule;
}

const GaussRule& cached_rule(int n) {
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

template <typename T>
T panel_value(const std::function<T(double)>& f, double a, double b,
              const GaussRule& rule) {
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  T sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

template <typename T>
struct Panel {
  double a, b;
  T value;     // two-half estimate, the kept value
  double err;  // |coarse - two-half|
  bool operator<(const Panel& o) const {
    if (err != o.err) return err < o.err;
    return a > o.a;  // deterministic tie-break
  }
};

template <typename T>
Panel<T> make_panel(const std::function<T(double)>& f, double a, double b,
                    const GaussRule& rule) {
  T coarse = panel_value(f, a, b, rule);
  double m = 0.5 * (a + b);
  T fine = panel_value(f, a, m, rule) + panel_value(f, m, b, rule);
  return Panel<T>{a, b, fine, std::abs(coarse - fine)};
}

template <typename T>
T adaptive_engine(const std::function<T(double)>& f,
                  const std::vector<double>& breaks, double rel_tol,
                  int max_panels) {
  if (breaks.size() < 2) throw std::invalid_argument("adaptive_integrate: need at least 2 breakpoints");
  const GaussRule& rule = cached_rule(10);
  std::priority_queue<Panel<T>> heap;
  T total{};
  double abs_total = 0.0, err_total = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i]))
      throw std::invalid_argument("adaptive_integrate: breakpoints must increase");
    Panel<T> p = make_panel(f, breaks[i], breaks[i + 1], rule);
    total += p.value;
    abs_total += std::abs(p.value);
    err_total += p.err;
    heap.push(p);
    ++count;
  }
  double floor = 1e-300;
  while (err_total > rel_tol * std::max(abs_total, floor)) {
    if (count >= max_panels)
      throw std::runtime_error("adaptive_integrate: panel budget exhausted before convergence");
    Panel<T> p = heap.top();
    heap.pop();
    total -= p.value;
    abs_total -= std::abs(p.value);
    err_total -= p.err;
    double m = 0.5 * (p.a + p.b);
    for (auto [a, b] : {std::pair{p.a, m}, std::pair{m, p.b}}) {
      Panel<T> c = make_panel(f, a, b, rule);
      total += c.value;
      abs_total += std::abs(c.value);
      err_total += c.err;
      heap.push(c);
    }
    ++count;
  }
  return total;
}

}  // namespace

const GaussRule& gauss_rule(int n) { return cached_rule(n); }

double arclength_jacobian(const BoundaryCurve& curve, double theta) {
  double r = curve.radius(theta);
  double dr = curve.radius_deriv(theta);
  return std::sqrt(r * r + dr * dr);
}

double integrate_data(const BoundaryCurve& curve, const Segment& seg,
                      const BoundaryData& g) {
  if (seg.length() < 0.0) throw std::invalid_argument("integrate_data: backwards segment");
  if (seg.length() == 0.0) return 0.0;
  const GaussRule& rule = cached_rule(10);
  std::function<double(double)> f = [&](double t) {
    return g(point_at(curve, t)) * arclength_jacobian(curve, t);
  };
  return panel_value(f, seg.theta_start, seg.theta_end, rule);
}

double integrate_data_refined(const BoundaryCurve& curve, const Segment& seg,
                              const BoundaryData& g, double rel_tol) {
  if (seg.length() == 0.0) return 0.0;
  std::function<double(double)> f = [&](double t) {
    return g(point_at(curve, t)) * arclength_jacobian(curve, t);
  };
  return adaptive_engine(f, {seg.theta_start, seg.theta_end}, rel_tol, 20000);
}

double adaptive_integrate(const std::function<double(double)>& f,
                          const std::vector<double>& breaks, double rel_tol,
                          int max_panels) {
  return adaptive_engine(f, breaks, rel_tol, max_panels);
}

cplx adaptive_integrate_complex(const std::function<cplx(double)>& f,
                                const std::vector<double>& breaks,
                                double rel_tol, int max_panels) {
  return adaptive_engine(f, breaks, rel_tol, max_panels);
}

}  // namespace wmfs
