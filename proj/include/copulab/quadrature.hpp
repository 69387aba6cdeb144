#pragma once

#include "copulab/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace copulab::quad {

/// Equally spaced nodes a, a+h, ..., b (intervals + 1 entries).
template <typename Scalar = double>
VectorX<Scalar> uniform_nodes(int intervals, Scalar a = Scalar(0), Scalar b = Scalar(1)) {
  VectorX<Scalar> x(intervals + 1);
  const Scalar h = (b - a) / Scalar(intervals);
  for (int k = 0; k <= intervals; ++k) x[k] = a + h * Scalar(k);
  x[intervals] = b;
  return x;
}

/// Composite Simpson weights matching uniform_nodes(intervals, a, b). intervals must be even.
template <typename Scalar = double>
VectorX<Scalar> simpson_weights(int intervals, Scalar a = Scalar(0), Scalar b = Scalar(1)) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw DomainError("Simpson rule needs an even number of intervals >= 2");
  }
  VectorX<Scalar> w(intervals + 1);
  const Scalar h = (b - a) / Scalar(intervals);
  for (int k = 0; k <= intervals; ++k) {
    w[k] = (k == 0 || k == intervals) ? Scalar(1) : (k % 2 == 1 ? Scalar(4) : Scalar(2));
  }
  return w * (h / Scalar(3));
}

template <typename F, typename Scalar = double>
Scalar simpson(F&& f, Scalar a, Scalar b, int intervals) {
  const VectorX<Scalar> x = uniform_nodes<Scalar>(intervals, a, b);
  const VectorX<Scalar> w = simpson_weights<Scalar>(intervals, a, b);
  Scalar sum(0);
  for (int k = 0; k <= intervals; ++k) sum += w[k] * f(x[k]);
  return sum;
}

/// Tensor-product composite Simpson over [0,1]^2.
template <typename F>
double simpson_2d(F&& f, int intervals) {
  const Vector x = uniform_nodes(intervals);
  const Vector w = simpson_weights(intervals);
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    double row = 0.0;
    for (int j = 0; j <= intervals; ++j) row += w[j] * f(x[i], x[j]);
    sum += w[i] * row;
  }
  return sum;
}

namespace detail {

template <typename F>
double adaptive_simpson_step(F& f, double a, double b, double eps, double whole, double fa,
                             double fm, double fb, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  const double half = std::max(0.5 * eps, 1e-16);
  return adaptive_simpson_step(f, a, m, half, left, fa, flm, fm, depth - 1) +
         adaptive_simpson_step(f, m, b, half, right, fm, frm, fb, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature. The range is pre-split into `panels` pieces so that kinks
/// which happen to fall between the first sample points are not missed.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 40,
                        int panels = 8) {
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    const double hi = (p + 1 == panels) ? b : lo + width;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    sum += detail::adaptive_simpson_step(f, lo, hi, tol / panels, whole, flo, fmid, fhi,
                                         max_depth);
  }
  return sum;
}

/// Gauss-Legendre rule on [-1, 1].
template <typename Scalar = double>
struct GaussLegendre {
  VectorX<Scalar> nodes;
  VectorX<Scalar> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) /
                          (Scalar(n) + Scalar(0.5)));
      Scalar dp(0);
      for (int iter = 0; iter < 100; ++iter) {
        Scalar p0(1), p1 = x;
        for (int k = 2; k <= n; ++k) {
          const Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
          p0 = p1;
          p1 = p2;
        }
        dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
        const Scalar dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < Scalar(1e-15)) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = weights[n - 1 - i] = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
    }
  }

  /// Composite rule over [a, b] split into `panels` equal pieces.
  template <typename F>
  Scalar integrate(F&& f, Scalar a, Scalar b, int panels = 1) const {
    Scalar sum(0);
    const Scalar width = (b - a) / Scalar(panels);
    for (int p = 0; p < panels; ++p) {
      const Scalar lo = a + width * Scalar(p);
      const Scalar half = width / Scalar(2);
      const Scalar mid = lo + half;
      for (Eigen::Index k = 0; k < nodes.size(); ++k) sum += weights[k] * f(mid + half * nodes[k]);
    }
    return sum * width / Scalar(2);
  }
};

/// Shared 20-point rule used by density-backed copulas.
inline const GaussLegendre<double>& gauss20() {
  static const GaussLegendre<double> rule(20);
  return rule;
}

}  // namespace copulab::quad
