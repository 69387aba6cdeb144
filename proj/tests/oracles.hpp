#pragma once

// Independent reference computations for the tests. Nothing here calls into the library's
// quadrature, fold or coefficient code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Composite Simpson with m (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 2000) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

/// Midpoint rule on an m x m grid.
inline double midpoint_2d(const std::function<double(double, double)>& f, int m = 400) {
  const double h = 1.0 / m;
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s += f((i + 0.5) * h, (j + 0.5) * h);
  return s * h * h;
}

inline double fgm_cdf(double t, double u, double v) { return u * v * (1.0 + t * (1.0 - u) * (1.0 - v)); }
inline double fgm_du(double t, double u, double v) { return v + t * (1.0 - 2.0 * u) * v * (1.0 - v); }
inline double fgm_dv(double t, double u, double v) { return u + t * (1.0 - 2.0 * v) * u * (1.0 - u); }
inline double fgm_density(double t, double u, double v) {
  return 1.0 + t * (1.0 - 2.0 * u) * (1.0 - 2.0 * v);
}

inline double frank_cdf(double l, double u, double v) {
  return -std::log(1.0 + (std::exp(-l * u) - 1.0) * (std::exp(-l * v) - 1.0) / (std::exp(-l) - 1.0)) / l;
}

/// Fold of two kernels: int_0^1 dA/dv(x, t) dB/du(t, y) dt.
inline double fold_point(const std::function<double(double, double)>& a_dv,
                         const std::function<double(double, double)>& b_du, double x, double y,
                         int m = 400) {
  return simpson([&](double t) { return a_dv(x, t) * b_du(t, y); }, 0.0, 1.0, m);
}

/// Sum of two independent U(0,1) variables.
inline double irwin_hall2(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 1.0) return 0.5 * x * x;
  if (x < 2.0) return 1.0 - 0.5 * (2.0 - x) * (2.0 - x);
  return 1.0;
}

/// Sample ranks-based Spearman correlation.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto rank = [](const std::vector<double>& x) {
    std::vector<std::size_t> idx(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&x](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> r(x.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = double(k);
    return r;
  };
  const std::vector<double> ra = rank(a), rb = rank(b);
  const double n = double(a.size());
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d2 += (ra[k] - rb[k]) * (ra[k] - rb[k]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace oracle
