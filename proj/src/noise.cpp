#include "copulab/noise.hpp"

#include "copulab/dependence.hpp"
#include "copulab/format.hpp"
#include "copulab/quadrature.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

namespace copulab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(field.c_str(), &end);
    if (field.empty() || *end != '\0' || errno != 0) {
      throw SpecError(what + ": '" + field + "' is not a number");
    }
    out.push_back(x);
  }
  return out;
}

double sqrt2x(double x) { return std::sqrt(2.0 * std::max(x, 0.0)); }

/// Nested adaptive Simpson over [a1,b1] x [a2,b2].
template <typename F>
double nested(F&& f, double a1, double b1, double a2, double b2) {
  return quad::adaptive_simpson(
      [&](double t1) {
        return quad::adaptive_simpson([&](double t2) { return f(t1, t2); }, a2, b2, 1e-11, 30, 4);
      },
      a1, b1, 1e-10, 30, 4);
}

TransformedNode closed_form_node(std::string name, std::function<double(double, double)> f) {
  TransformedNode node;
  node.name = std::move(name);
  node.cdf = [f = std::move(f)](double u, double v) { return f(clamp01(u), clamp01(v)); };
  return node;
}

}  // namespace

// ---------------------------------------------------------------------------
// Marginals
// ---------------------------------------------------------------------------

Marginal Marginal::uniform(double a, double b) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("uniform marginal needs finite a < b");
  }
  return Marginal(Kind::Uniform, a, b, "uniform:" + detail::num(a) + "," + detail::num(b));
}

Marginal Marginal::normal(double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(mu)) throw DomainError("normal marginal needs sigma > 0");
  return Marginal(Kind::Normal, mu, sigma, "normal:" + detail::num(mu) + "," + detail::num(sigma));
}

Marginal Marginal::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential marginal needs rate > 0");
  return Marginal(Kind::Exponential, rate, 0.0, "exponential:" + detail::num(rate));
}

double Marginal::cdf(double x) const {
  switch (kind_) {
    case Kind::Uniform: return clamp01((x - p1_) / (p2_ - p1_));
    case Kind::Normal: return normal_cdf((x - p1_) / p2_);
    case Kind::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-p1_ * x);
  }
  return 0.0;
}

double Marginal::inv_cdf(double q) const {
  q = clamp01(q);
  switch (kind_) {
    case Kind::Uniform: return p1_ + q * (p2_ - p1_);
    case Kind::Normal:
      if (q <= 0.0) return -kInf;
      if (q >= 1.0) return kInf;
      return p1_ + p2_ * normal_quantile(q);
    case Kind::Exponential:
      if (q >= 1.0) return kInf;
      return -std::log1p(-q) / p1_;
  }
  return 0.0;
}

double Marginal::pdf(double x) const {
  switch (kind_) {
    case Kind::Uniform: return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
    case Kind::Normal: {
      const double z = (x - p1_) / p2_;
      return std::exp(-0.5 * z * z) / (p2_ * std::sqrt(2.0 * std::numbers::pi));
    }
    case Kind::Exponential: return x < 0.0 ? 0.0 : p1_ * std::exp(-p1_ * x);
  }
  return 0.0;
}

Marginal parse_marginal(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::vector<double> p =
      parse_numbers(colon == std::string::npos ? "" : text.substr(colon + 1), "marginal '" + text + "'");
  try {
    if (kind == "uniform") {
      if (p.empty()) return Marginal::uniform();
      if (p.size() == 2) return Marginal::uniform(p[0], p[1]);
    } else if (kind == "normal") {
      if (p.empty()) return Marginal::normal();
      if (p.size() == 2) return Marginal::normal(p[0], p[1]);
    } else if (kind == "exponential") {
      if (p.empty()) return Marginal::exponential();
      if (p.size() == 1) return Marginal::exponential(p[0]);
    } else {
      throw SpecError("marginal: unknown family '" + kind + "'");
    }
  } catch (const DomainError& e) {
    throw SpecError(std::string("marginal: ") + e.what());
  }
  throw SpecError("marginal: wrong number of parameters in '" + text + "'");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double q) {
  if (q <= 0.0) return -kInf;
  if (q >= 1.0) return kInf;
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  double x;
  if (q < lo) {
    const double r = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (q <= 1.0 - lo) {
    const double r0 = q - 0.5;
    const double r = r0 * r0;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * r0 /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log1p(-q));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  // Halley refinement against the erfc-based CDF.
  const double e = normal_cdf(x) - q;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double irwin_hall2_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 1.0) return 0.5 * x * x;
  if (x < 2.0) return 1.0 - 0.5 * (2.0 - x) * (2.0 - x);
  return 1.0;
}

double irwin_hall2_inv(double q) {
  q = clamp01(q);
  if (q <= 0.5) return std::sqrt(2.0 * q);
  return 2.0 - std::sqrt(2.0 * (1.0 - q));
}

ConvolvedMarginal::ConvolvedMarginal(Marginal base, Marginal noise)
    : base_(std::move(base)),
      noise_(std::move(noise)),
      irwin_hall_(base_.is_standard_uniform() && noise_.is_standard_uniform()) {}

double ConvolvedMarginal::cdf(double x) const {
  if (irwin_hall_) return irwin_hall2_cdf(x);
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  return clamp01(quad::adaptive_simpson(
      [&](double s) { return base_.cdf(x - noise_.inv_cdf(s)); }, 0.0, 1.0, 1e-12));
}

double ConvolvedMarginal::inv_cdf(double q) const {
  q = clamp01(q);
  if (irwin_hall_) return irwin_hall2_inv(q);
  if (q <= 0.0) return base_.inv_cdf(0.0) + noise_.inv_cdf(0.0);
  if (q >= 1.0) return base_.inv_cdf(1.0) + noise_.inv_cdf(1.0);
  const double guess = base_.inv_cdf(q) + noise_.inv_cdf(q);
  double step = 1.0;
  double lo = guess;
  double hi = guess;
  int expansions = 0;
  while (cdf(lo) >= q) {
    lo -= step;
    step *= 2.0;
    if (++expansions > 200) throw MarginalMismatch("convolved marginal: no lower bracket");
  }
  step = 1.0;
  while (cdf(hi) < q) {
    hi += step;
    step *= 2.0;
    if (++expansions > 400) throw MarginalMismatch("convolved marginal: no upper bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (!std::isfinite(hi)) throw MarginalMismatch("convolved marginal: inversion diverged");
  return hi;
}

// ---------------------------------------------------------------------------
// General noise copulas
// ---------------------------------------------------------------------------

Copula c5_general(const Copula& c, const Marginal& f1, const Marginal& f2, const Marginal& f3) {
  const ConvolvedMarginal f4(f1, f3);
  TransformedNode node;
  node.name = "c5(" + c.name() + ";" + f1.name() + ";" + f2.name() + ";" + f3.name() + ")";
  node.cdf = [c, f1, f3, f4](double u, double v) {
    u = clamp01(u);
    v = clamp01(v);
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    const double x = f4.inv_cdf(u);
    return quad::adaptive_simpson(
        [&](double t) { return cdf(c, f1.cdf(x - f3.inv_cdf(t)), v); }, 0.0, 1.0, 1e-12);
  };
  return Copula::transformed(std::move(node));
}

Copula c6_general(const Copula& c, const Marginal& f1, const Marginal& f2, const Marginal& f3) {
  const ConvolvedMarginal f4(f1, f3);
  const ConvolvedMarginal f5(f2, f3);
  TransformedNode node;
  node.name = "c6(" + c.name() + ";" + f1.name() + ";" + f2.name() + ";" + f3.name() + ")";
  node.cdf = [c, f1, f2, f3, f4, f5](double u, double v) {
    u = clamp01(u);
    v = clamp01(v);
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    const double x = f4.inv_cdf(u);
    const double y = f5.inv_cdf(v);
    return quad::adaptive_simpson(
        [&](double t) {
          const double z = f3.inv_cdf(t);
          return cdf(c, f1.cdf(x - z), f2.cdf(y - z));
        },
        0.0, 1.0, 1e-12);
  };
  return Copula::transformed(std::move(node));
}

Copula c7_general(const Copula& c, const Marginal& f1, const Marginal& f2, const Marginal& g1,
                  const Marginal& g2) {
  const ConvolvedMarginal f7(f1, g1);
  const ConvolvedMarginal f8(f2, g2);
  TransformedNode node;
  node.name = "c7(" + c.name() + ";" + f1.name() + ";" + f2.name() + ";" + g1.name() + ";" +
              g2.name() + ")";
  node.cdf = [c, f1, f2, g1, g2, f7, f8](double u, double v) {
    u = clamp01(u);
    v = clamp01(v);
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    const double x = f7.inv_cdf(u);
    const double y = f8.inv_cdf(v);
    return nested(
        [&](double t1, double t2) {
          return cdf(c, f1.cdf(x - g1.inv_cdf(t1)), f2.cdf(y - g2.inv_cdf(t2)));
        },
        0.0, 1.0, 0.0, 1.0);
  };
  return Copula::transformed(std::move(node));
}

// ---------------------------------------------------------------------------
// Closed forms for uniform margins
// ---------------------------------------------------------------------------

double c5_closed_M_uniform(UnitPoint p) {
  const double u = p.u;
  const double v = p.v;
  const double r = sqrt2x(u);
  const double s = sqrt2x(1.0 - u);
  const double a = 1.0 - s;
  if (r <= v && v <= 1.0) return u;
  if (v <= r && r <= 1.0) return v * r - 0.5 * v * v;
  if (0.0 <= a && a <= v) return v - 0.5 * (1.0 - v - s) * (1.0 - v - s);
  return v;
}

double c6_closed_indep_uniform(UnitPoint p) {
  double x = irwin_hall2_inv(p.u);
  double y = irwin_hall2_inv(p.v);
  if (x > y) std::swap(x, y);
  if (x <= 0.0) return 0.0;
  if (y < 1.0) return 0.5 * x * x * y - x * x * x / 6.0;
  if (x < 1.0) {
    if (y <= 1.0 + x) {
      const double d = x - y + 1.0;
      return 0.5 * x * x - d * d * d / 6.0;
    }
    return 0.5 * x * x;
  }
  return 1.0 - 0.5 * (2.0 - x) * (2.0 - x) - (2.0 - y) * (2.0 - y) * (2.0 - y + 3.0 * x - 3.0) / 6.0;
}

double c7_uniform_regions(const Copula& c, UnitPoint p) {
  const double u = p.u;
  const double v = p.v;
  const auto a = [](double x) { return 1.0 - sqrt2x(1.0 - x); };
  const auto b = [](double x) { return sqrt2x(x); };
  const auto C = [&c](double s, double t) { return cdf(c, s, t); };
  if (u <= 0.5 && v <= 0.5) {
    const double bu = b(u), bv = b(v);
    return nested([&](double t1, double t2) { return C(bu - t1, bv - t2); }, 0.0, bu, 0.0, bv);
  }
  if (u <= 0.5 && v >= 0.5) {
    const double bu = b(u), av = a(v);
    return nested([&](double t1, double t2) { return C(bu - t1, 1.0 + av - t2); }, 0.0, bu, av,
                  1.0) +
           u * av;
  }
  if (v <= 0.5 && u >= 0.5) {
    const double au = a(u), bv = b(v);
    return nested([&](double t1, double t2) { return C(1.0 + au - t1, bv - t2); }, au, 1.0, 0.0,
                  bv) +
           v * au;
  }
  const double au = a(u), av = a(v);
  return nested([&](double t1, double t2) { return C(1.0 + au - t1, 1.0 + av - t2); }, au, 1.0,
                av, 1.0) +
         u * av + v * au - au * av;
}

Copula c5_m_uniform_model() {
  return Copula::transformed(
      closed_form_node("c5-m-uniform", [](double u, double v) { return c5_closed_M_uniform({u, v}); }));
}

Copula c6_indep_uniform_model() {
  TransformedNode node = closed_form_node(
      "c6-indep-uniform", [](double u, double v) { return c6_closed_indep_uniform({u, v}); });
  return Copula::transformed(std::move(node));
}

C6TableValue c6_table_as_printed(UnitPoint p) {
  const double u = p.u;
  const double v = p.v;
  const double ru = sqrt2x(u), rv = sqrt2x(v);
  const double su = sqrt2x(1.0 - u), sv = sqrt2x(1.0 - v);
  const double bound_u = 1.0 - 0.5 * (ru - 1.0) * (ru - 1.0);
  const double bound_v = 1.0 - 0.5 * (rv - 1.0) * (rv - 1.0);
  const auto cube = [](double x) { return x * x * x; };
  if (u <= v && v <= 0.5) return {0.5 * u * rv, 'A'};
  if (0.5 < v && v <= bound_u && u <= 0.5) return {u - cube(ru + sv - 1.0) / 6.0, 'B'};
  if (v > bound_u && u <= 0.5) return {u, 'C'};
  if (0.5 <= u && u <= v) return {u - (1.0 - v) * (sv + 3.0 - 3.0 * su) / 3.0, 'D'};
  if (0.5 <= v && v <= u) return {v - (1.0 - u) * (su + 3.0 - 3.0 * su) / 3.0, 'E'};
  if (0.5 < u && u <= bound_v && v <= 0.5) return {v - cube(rv + su - 1.0) / 6.0, 'F'};
  if (u > bound_v && v <= 0.5) return {v, 'G'};
  if (v <= u && u <= 0.5) return {0.5 * v * ru, 'H'};
  return {std::numeric_limits<double>::quiet_NaN(), '?'};
}

C6DiscrepancyReport c6_table_discrepancy(int n, double tol) {
  C6DiscrepancyReport r;
  r.tol = tol;
  const Marginal unif = Marginal::uniform();
  const Copula oracle = c6_general(Copula::pi(), unif, unif, unif);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = double(i + 1) / (n + 1);
      const double v = double(j + 1) / (n + 1);
      const C6TableValue t = c6_table_as_printed({u, v});
      C6TableDiscrepancy row;
      row.u = u;
      row.v = v;
      row.region = t.region;
      row.table = t.value;
      row.closed = c6_closed_indep_uniform({u, v});
      row.quadrature = cdf(oracle, u, v);
      const double te = std::abs(row.table - row.quadrature);
      r.max_table_error = std::max(r.max_table_error, std::isnan(te) ? kInf : te);
      r.max_closed_error = std::max(r.max_closed_error, std::abs(row.closed - row.quadrature));
      if (!(te <= tol) &&
          std::find(r.regions_disagreeing.begin(), r.regions_disagreeing.end(), t.region) ==
              r.regions_disagreeing.end()) {
        r.regions_disagreeing.push_back(t.region);
      }
      r.rows.push_back(row);
    }
  }
  std::sort(r.regions_disagreeing.begin(), r.regions_disagreeing.end());
  return r;
}

TailPair tail_coeffs_of_noise(NoiseId id) {
  Copula c = Copula::frechet_m();
  if (id == NoiseId::C5MUniform) c = c5_m_uniform_model();
  if (id == NoiseId::C6IndepUniform) c = c6_indep_uniform_model();
  return {tail_lower(c), tail_upper(c)};
}

}  // namespace copulab
