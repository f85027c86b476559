#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

namespace wmfs {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wrap an angle into [-pi, pi).
inline double wrap_angle(double theta) {
  double t = std::remainder(theta, two_pi);
  if (t >= pi) t -= two_pi;
  if (t < -pi) t += two_pi;
  return t;
}

/// z^n for integer n by repeated multiplication; avoids pow/log branch cuts.
inline cplx ipow(cplx z, int n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  cplx r = 1.0;
  cplx base = z;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

/// Process-wide worker count for parallel loops. 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n) on the worker pool. fn must only write to
/// per-index state; results are then deterministic for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wmfs
