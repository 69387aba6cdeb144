#include "copulab/copula.hpp"

#include "copulab/quadrature.hpp"
#include "copulab/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace copulab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kFdStep = 1e-6;
constexpr double kFdDensityStep = 1e-4;

double fd_partial_u(const Function2& f, double x, double v) {
  const double lo = std::max(0.0, x - kFdStep);
  const double hi = std::min(1.0, x + kFdStep);
  return (f(hi, v) - f(lo, v)) / (hi - lo);
}

double fd_partial_v(const Function2& f, double u, double y) {
  const double lo = std::max(0.0, y - kFdStep);
  const double hi = std::min(1.0, y + kFdStep);
  return (f(u, hi) - f(u, lo)) / (hi - lo);
}

double fd_density(const Function2& f, double u, double v) {
  const double u0 = std::max(0.0, u - kFdDensityStep);
  const double u1 = std::min(1.0, u + kFdDensityStep);
  const double v0 = std::max(0.0, v - kFdDensityStep);
  const double v1 = std::min(1.0, v + kFdDensityStep);
  return (f(u1, v1) - f(u0, v1) - f(u1, v0) + f(u0, v0)) / ((u1 - u0) * (v1 - v0));
}

double frank_cdf(double l, double u, double v) {
  const double a = std::expm1(-l * u);
  const double b = std::expm1(-l * v);
  const double d = std::expm1(-l);
  return -std::log1p(a * b / d) / l;
}

// dC/du; the v-partial follows by symmetry.
double frank_partial(double l, double x, double v) {
  const double a = std::expm1(-l * x);
  const double b = std::expm1(-l * v);
  const double d = std::expm1(-l);
  return std::exp(-l * x) * b / (d + a * b);
}

double frank_density(double l, double u, double v) {
  const double a = std::expm1(-l * u);
  const double b = std::expm1(-l * v);
  const double d = std::expm1(-l);
  const double den = d + a * b;
  return -l * d * std::exp(-l * (u + v)) / (den * den);
}

const quad::GaussLegendre<double>& gl() { return quad::gauss20(); }

double density_node_cdf(const DensityNode& n, double u, double v) {
  if (n.cdf) return n.cdf(u, v);
  if (u <= 0.0 || v <= 0.0) return 0.0;
  return gl().integrate(
      [&](double s) { return gl().integrate([&](double t) { return n.density(s, t); }, 0.0, v, 2); },
      0.0, u, 2);
}

double density_node_partial_u(const DensityNode& n, double x, double v) {
  if (n.partial_u) return n.partial_u(x, v);
  if (v <= 0.0) return 0.0;
  return gl().integrate([&](double t) { return n.density(x, t); }, 0.0, v, 4);
}

double density_node_partial_v(const DensityNode& n, double u, double y) {
  if (n.partial_v) return n.partial_v(u, y);
  if (u <= 0.0) return 0.0;
  return gl().integrate([&](double s) { return n.density(s, y); }, 0.0, u, 4);
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Copula Copula::pi() { return Copula(PiNode{}); }
Copula Copula::frechet_m() { return Copula(FrechetMNode{}); }
Copula Copula::frechet_w() { return Copula(FrechetWNode{}); }

Copula Copula::frank(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw DomainError("Frank copula needs a finite nonzero lambda");
  }
  return Copula(FrankNode{lambda});
}

Copula Copula::fgm(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("FGM theta must lie in [0,1]");
  return Copula(FgmNode{theta});
}

Copula Copula::density_backed(DensityNode node) {
  if (!node.density) throw DomainError("density-backed copula needs a density");
  return Copula(std::move(node));
}

Copula Copula::grid(GridCopula grid, std::string name) {
  return Copula(GridNode{std::move(grid), std::move(name)});
}

Copula Copula::mixture(std::vector<double> weights, std::vector<Copula> components,
                       std::string name) {
  if (weights.size() != components.size() || weights.empty()) {
    throw DomainError("mixture needs one weight per component");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("mixture weights sum to " + detail::num(total) + ", not 1");
  }
  MixtureNode node;
  node.name = std::move(name);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    node.weights.push_back(weights[k]);
    node.components.push_back(std::move(components[k]));
  }
  if (node.weights.size() == 1 && node.name.empty()) return node.components.front();
  return Copula(std::move(node));
}

Copula Copula::transformed(TransformedNode node) {
  if (!node.cdf) throw DomainError("transformed copula needs a CDF");
  return Copula(std::move(node));
}

std::string Copula::name() const {
  return std::visit(
      overloaded{
          [](const PiNode&) -> std::string { return "pi"; },
          [](const FrechetMNode&) -> std::string { return "M"; },
          [](const FrechetWNode&) -> std::string { return "W"; },
          [](const FrankNode& n) { return "frank(" + detail::num(n.lambda) + ")"; },
          [](const FgmNode& n) { return "fgm(" + detail::num(n.theta) + ")"; },
          [](const DensityNode& n) { return n.name; },
          [](const GridNode& n) { return n.name; },
          [](const MixtureNode& n) {
            if (!n.name.empty()) return n.name;
            std::string s = "mixture[";
            for (std::size_t k = 0; k < n.weights.size(); ++k) {
              if (k) s += "+";
              s += detail::num(n.weights[k]) + "*" + n.components[k].name();
            }
            return s + "]";
          },
          [](const TransformedNode& n) { return n.name; },
      },
      node());
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double cdf(const Copula& c, UnitPoint p) { return cdf(c, p.u, p.v); }

double cdf(const Copula& c, double u, double v) {
  u = clamp01(u);
  v = clamp01(v);
  return std::visit(
      overloaded{
          [&](const PiNode&) { return u * v; },
          [&](const FrechetMNode&) { return std::min(u, v); },
          [&](const FrechetWNode&) { return std::max(u + v - 1.0, 0.0); },
          [&](const FrankNode& n) { return frank_cdf(n.lambda, u, v); },
          [&](const FgmNode& n) { return u * v * (1.0 + n.theta * (1.0 - u) * (1.0 - v)); },
          [&](const DensityNode& n) { return density_node_cdf(n, u, v); },
          [&](const GridNode& n) { return n.grid.cdf(u, v); },
          [&](const MixtureNode& n) {
            double s = 0.0;
            for (std::size_t k = 0; k < n.weights.size(); ++k) s += n.weights[k] * cdf(n.components[k], u, v);
            return s;
          },
          [&](const TransformedNode& n) { return n.cdf(u, v); },
      },
      c.node());
}

DensityValue density(const Copula& c, UnitPoint p) { return density(c, p.u, p.v); }

DensityValue density(const Copula& c, double u, double v) {
  u = clamp01(u);
  v = clamp01(v);
  return std::visit(
      overloaded{
          [&](const PiNode&) { return DensityValue{1.0, false}; },
          [&](const FrechetMNode&) { return DensityValue{0.0, true}; },
          [&](const FrechetWNode&) { return DensityValue{0.0, true}; },
          [&](const FrankNode& n) { return DensityValue{frank_density(n.lambda, u, v), false}; },
          [&](const FgmNode& n) {
            return DensityValue{1.0 + n.theta * (1.0 - 2.0 * u) * (1.0 - 2.0 * v), false};
          },
          [&](const DensityNode& n) { return DensityValue{n.density(u, v), false}; },
          [&](const GridNode& n) {
            return DensityValue{n.grid.ac_density(u, v), n.grid.singular_m_mass() > 0.0};
          },
          [&](const MixtureNode& n) {
            DensityValue out;
            for (std::size_t k = 0; k < n.weights.size(); ++k) {
              const DensityValue d = density(n.components[k], u, v);
              out.value += n.weights[k] * d.value;
              out.singular_part = out.singular_part || d.singular_part;
            }
            return out;
          },
          [&](const TransformedNode& n) {
            DensityValue out;
            if (n.density) {
              out.value = n.density(u, v);
            } else if (n.fd_density) {
              out.value = fd_density(n.cdf, u, v);
            } else {
              throw NoDensity("model '" + n.name + "' has no evaluable density");
            }
            const Atoms a = atoms(c, u);
            out.singular_part = a.main > 0.0 || a.anti > 0.0;
            return out;
          },
      },
      c.node());
}

double cond_cdf(const Copula& c, double x, double v) {
  x = clamp01(x);
  v = clamp01(v);
  return std::visit(
      overloaded{
          [&](const PiNode&) { return v; },
          [&](const FrechetMNode&) { return v >= x ? 1.0 : 0.0; },
          [&](const FrechetWNode&) { return x + v >= 1.0 ? 1.0 : 0.0; },
          [&](const FrankNode& n) { return frank_partial(n.lambda, x, v); },
          [&](const FgmNode& n) { return v + n.theta * v * (1.0 - v) * (1.0 - 2.0 * x); },
          [&](const DensityNode& n) { return density_node_partial_u(n, x, v); },
          [&](const GridNode& n) { return n.grid.partial_u(x, v); },
          [&](const MixtureNode& n) {
            double s = 0.0;
            for (std::size_t k = 0; k < n.weights.size(); ++k) s += n.weights[k] * cond_cdf(n.components[k], x, v);
            return s;
          },
          [&](const TransformedNode& n) {
            const double d = n.partial_u ? n.partial_u(x, v) : fd_partial_u(n.cdf, x, v);
            return clamp01(d);
          },
      },
      c.node());
}

double cond_cdf_v(const Copula& c, double u, double y) {
  u = clamp01(u);
  y = clamp01(y);
  return std::visit(
      overloaded{
          [&](const PiNode&) { return u; },
          [&](const FrechetMNode&) { return u >= y ? 1.0 : 0.0; },
          [&](const FrechetWNode&) { return u + y >= 1.0 ? 1.0 : 0.0; },
          [&](const FrankNode& n) { return frank_partial(n.lambda, y, u); },
          [&](const FgmNode& n) { return u + n.theta * u * (1.0 - u) * (1.0 - 2.0 * y); },
          [&](const DensityNode& n) { return density_node_partial_v(n, u, y); },
          [&](const GridNode& n) { return n.grid.partial_v(u, y); },
          [&](const MixtureNode& n) {
            double s = 0.0;
            for (std::size_t k = 0; k < n.weights.size(); ++k) s += n.weights[k] * cond_cdf_v(n.components[k], u, y);
            return s;
          },
          [&](const TransformedNode& n) {
            const double d = n.partial_v ? n.partial_v(u, y) : fd_partial_v(n.cdf, u, y);
            return clamp01(d);
          },
      },
      c.node());
}

Atoms atoms(const Copula& c, double x) {
  x = clamp01(x);
  return std::visit(
      overloaded{
          [](const FrechetMNode&) { return Atoms{1.0, 0.0}; },
          [](const FrechetWNode&) { return Atoms{0.0, 1.0}; },
          [](const GridNode& n) { return Atoms{n.grid.singular_m_mass(), 0.0}; },
          [&](const MixtureNode& n) {
            Atoms out;
            for (std::size_t k = 0; k < n.weights.size(); ++k) {
              const Atoms a = atoms(n.components[k], x);
              out.main += n.weights[k] * a.main;
              out.anti += n.weights[k] * a.anti;
            }
            return out;
          },
          [&](const TransformedNode& n) {
            return Atoms{n.main_atom ? n.main_atom(x) : 0.0, n.anti_atom ? n.anti_atom(x) : 0.0};
          },
          [](const auto&) { return Atoms{}; },
      },
      c.node());
}

double singular_m_mass(const Copula& c) {
  return std::visit(
      overloaded{
          [](const FrechetMNode&) { return 1.0; },
          [](const GridNode& n) { return n.grid.singular_m_mass(); },
          [](const MixtureNode& n) {
            double s = 0.0;
            for (std::size_t k = 0; k < n.weights.size(); ++k) s += n.weights[k] * singular_m_mass(n.components[k]);
            return s;
          },
          [](const TransformedNode& n) {
            if (!n.main_atom) return 0.0;
            return quad::simpson([&](double x) { return n.main_atom(x); }, 0.0, 1.0, 256);
          },
          [](const auto&) { return 0.0; },
      },
      c.node());
}

bool is_absolutely_continuous(const Copula& c) {
  return std::visit(
      overloaded{
          [](const FrechetMNode&) { return false; },
          [](const FrechetWNode&) { return false; },
          [](const GridNode& n) { return n.grid.singular_m_mass() == 0.0; },
          [](const MixtureNode& n) {
            return std::all_of(n.components.begin(), n.components.end(),
                               [](const Copula& k) { return is_absolutely_continuous(k); });
          },
          [](const TransformedNode& n) {
            const auto vanishes = [](const Function1& f) {
              if (!f) return true;
              for (int k = 0; k <= 64; ++k)
                if (f(k / 64.0) != 0.0) return false;
              return true;
            };
            return vanishes(n.main_atom) && vanishes(n.anti_atom);
          },
          [](const auto&) { return true; },
      },
      c.node());
}

double cond_quantile(const Copula& c, double x, double q) {
  x = clamp01(x);
  q = clamp01(q);
  if (c.as<FrechetMNode>()) return x;
  if (c.as<FrechetWNode>()) return 1.0 - x;
  const Atoms a = atoms(c, x);
  if (a.main > 0.0) {
    const double at = cond_cdf(c, x, x);
    if (q > at - a.main && q <= at) return x;
  }
  if (a.anti > 0.0) {
    const double at = cond_cdf(c, x, 1.0 - x);
    if (q > at - a.anti && q <= at) return 1.0 - x;
  }
  if (q <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (cond_cdf(c, x, mid) >= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

bool has_smooth_kernels(const Copula& c) {
  if (c.as<PiNode>() || c.as<FrankNode>() || c.as<FgmNode>() || c.as<DensityNode>()) return true;
  if (const auto* t = c.as<TransformedNode>()) return t->smooth;
  return false;
}

double sup_distance(const Copula& a, const Copula& b, int n) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double u = double(i) / n;
      const double v = double(j) / n;
      worst = std::max(worst, std::abs(cdf(a, u, v) - cdf(b, u, v)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

ValidationReport validate(const Copula& c, int n, double tol) {
  if (n < 2) throw DomainError("validate needs n >= 2");
  ValidationReport r;
  r.n = n;
  r.tol = tol;
  Matrix table(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) table(i, j) = cdf(c, double(i) / n, double(j) / n);

  double ground_u = 0, ground_v = 0, margin_u = 0, margin_v = 0, rect_u = 0, rect_v = 0;
  for (int k = 0; k <= n; ++k) {
    const double x = double(k) / n;
    const double g0 = std::abs(table(0, k));
    const double g1 = std::abs(table(k, 0));
    if (g0 > r.ground_error) { r.ground_error = g0; ground_u = 0; ground_v = x; }
    if (g1 > r.ground_error) { r.ground_error = g1; ground_u = x; ground_v = 0; }
    const double m0 = std::abs(table(n, k) - x);
    const double m1 = std::abs(table(k, n) - x);
    if (m0 > r.margin_error) { r.margin_error = m0; margin_u = 1; margin_v = x; }
    if (m1 > r.margin_error) { r.margin_error = m1; margin_u = x; margin_v = 1; }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double vol = table(i + 1, j + 1) - table(i, j + 1) - table(i + 1, j) + table(i, j);
      if (vol < r.min_volume) {
        r.min_volume = vol;
        rect_u = double(i) / n;
        rect_v = double(j) / n;
      }
    }
  }
  if (r.ground_error > tol) {
    r.worst_check = "ground";
    r.worst_u = ground_u;
    r.worst_v = ground_v;
  } else if (r.margin_error > tol) {
    r.worst_check = "margin";
    r.worst_u = margin_u;
    r.worst_v = margin_v;
  } else if (r.min_volume < -tol) {
    r.worst_check = "2-increasing";
    r.worst_u = rect_u;
    r.worst_v = rect_v;
  }
  r.pass = r.worst_check.empty();
  return r;
}

MarginReport density_unit_margins(const Function2& density_fn, double tol, int intervals) {
  const Vector x = quad::uniform_nodes(intervals);
  const Vector w = quad::simpson_weights(intervals);
  Matrix d(intervals + 1, intervals + 1);
  for (int i = 0; i <= intervals; ++i)
    for (int j = 0; j <= intervals; ++j) d(i, j) = density_fn(x[i], x[j]);

  const Vector over_u = d.transpose() * w;  // indexed by v
  const Vector over_v = d * w;              // indexed by u
  MarginReport r;
  for (int k = 0; k <= intervals; ++k) {
    const double dr = std::abs(over_u[k] - 1.0);
    const double dc = std::abs(over_v[k] - 1.0);
    if (dr > r.max_deviation) {
      r.max_deviation = dr;
      r.worst_margin = "row";
      r.worst_at = x[k];
    }
    if (dc > r.max_deviation) {
      r.max_deviation = dc;
      r.worst_margin = "column";
      r.worst_at = x[k];
    }
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

// ---------------------------------------------------------------------------
// m-density family
// ---------------------------------------------------------------------------

namespace {

double golden_max(const Function1& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = f(d);
    }
  }
  return std::max(fc, fd);
}

double scan_max(const Function1& f) {
  constexpr int kPoints = 4097;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kPoints; ++k) {
    const double val = f(double(k) / (kPoints - 1));
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  const double lo = double(std::max(best - 1, 0)) / (kPoints - 1);
  const double hi = double(std::min(best + 1, kPoints - 1)) / (kPoints - 1);
  return std::max(best_val, golden_max(f, lo, hi));
}

}  // namespace

double scan_sup(const Function1& f) { return scan_max(f); }

double scan_inf(const Function1& f) {
  return -scan_max([&](double x) { return -f(x); });
}

MDensityConstants m_density_constants(const Function1& h, const Function1& g) {
  MDensityConstants k;
  k.a1 = scan_sup(h);
  k.a2 = scan_sup(g);
  k.b1 = scan_inf(h);
  k.b2 = scan_inf(g);
  k.norm_h = quad::adaptive_simpson([&](double x) { return std::abs(h(x)); }, 0.0, 1.0, 1e-14);
  k.norm_g = quad::adaptive_simpson([&](double x) { return std::abs(g(x)); }, 0.0, 1.0, 1e-14);
  return k;
}

Function2 m_density(const MDensitySpec& spec) {
  if (spec.variant < 1 || spec.variant > 4) throw DomainError("m-density variant must be 1..4");
  const MDensityConstants k = m_density_constants(spec.h, spec.g);
  const Function1 h = spec.h;
  const Function1 g = spec.g;
  const double a1 = k.a1, a2 = k.a2, b1 = k.b1, b2 = k.b2, nh = k.norm_h, ng = k.norm_g;
  switch (spec.variant) {
    case 1:
      return [=](double x, double y) {
        return (a2 - g(x) * h(y) + h(y) * ng + g(x) * nh) / (a2 + ng * nh);
      };
    case 2:
      return [=](double x, double y) {
        return (a1 * a2 - g(x) * h(y) + h(y) * ng + g(x) * nh) / (a1 * a2 + ng * nh);
      };
    case 3:
      return [=](double x, double y) {
        return (a2 * (a1 - b1) - g(x) * (a1 - h(y)) + (a1 - h(y)) * ng + g(x) * (a1 - nh)) /
               (a2 * (a1 - b1) + ng * (a1 - nh));
      };
    default:
      return [=](double x, double y) {
        const double den = (a2 - b2) * (a1 - b1) + (a2 - ng) * (a1 - nh);
        return ((a2 - b2) * (a1 - b1) - (a2 - g(x)) * (a1 - h(y))) / den +
               ((a1 - h(y)) * (a2 - ng) + (a2 - g(x)) * (a1 - nh)) / den;
      };
  }
}

Copula make_m_copula(const MDensitySpec& spec) {
  if (spec.variant < 1 || spec.variant > 4) throw DomainError("m-density variant must be 1..4");
  const MDensityConstants k = m_density_constants(spec.h, spec.g);
  const double a1 = k.a1, a2 = k.a2, b1 = k.b1, b2 = k.b2, nh = k.norm_h, ng = k.norm_g;

  // c(x,y) = (A + B g(x) + Ch h(y) + D g(x) h(y)) / den, expanded from the density formula.
  double A = 0, B = 0, Ch = 0, D = 0, den = 0;
  switch (spec.variant) {
    case 1: A = a2; B = nh; Ch = ng; D = -1; den = a2 + ng * nh; break;
    case 2: A = a1 * a2; B = nh; Ch = ng; D = -1; den = a1 * a2 + ng * nh; break;
    case 3:
      A = a2 * (a1 - b1) + a1 * ng; B = -nh; Ch = -ng; D = 1;
      den = a2 * (a1 - b1) + ng * (a1 - nh);
      break;
    default:
      A = (a2 - b2) * (a1 - b1) + a1 * a2 - a1 * ng - a2 * nh; B = nh; Ch = ng; D = -1;
      den = (a2 - b2) * (a1 - b1) + (a2 - ng) * (a1 - nh);
      break;
  }
  const std::string name = "m" + std::to_string(spec.variant) + "[h=" + spec.h_label +
                           ",g=" + spec.g_label + "]";
  if (!(std::abs(den) > 1e-14) || !std::isfinite(den)) {
    throw NotADensity(name + ": degenerate normalising constant " + detail::num(den));
  }

  const Function2 dens = m_density(spec);
  double worst = std::numeric_limits<double>::infinity();
  double wx = 0, wy = 0;
  for (int i = 0; i < 256; ++i) {
    for (int j = 0; j < 256; ++j) {
      const double x = i / 255.0, y = j / 255.0;
      const double val = dens(x, y);
      if (!(val >= worst)) {
        worst = val;
        wx = x;
        wy = y;
      }
    }
  }
  if (!(worst >= -1e-12)) {
    throw NotADensity(name + ": negative density " + detail::num(worst) + " at (" +
                      detail::num(wx) + ", " + detail::num(wy) + ")");
  }
  const MarginReport margins = density_unit_margins(dens, 1e-6);
  if (!margins.pass) {
    throw NotADensity(name + ": " + margins.worst_margin + " margin deviates from 1 by " +
                      detail::num(margins.max_deviation) + " at " + detail::num(margins.worst_at));
  }

  const Function1 h = spec.h;
  const Function1 g = spec.g;
  const auto G = [g](double u) { return u <= 0.0 ? 0.0 : quad::gauss20().integrate(g, 0.0, u, 2); };
  const auto H = [h](double v) { return v <= 0.0 ? 0.0 : quad::gauss20().integrate(h, 0.0, v, 2); };

  DensityNode node;
  node.name = name;
  node.density = dens;
  node.cdf = [=](double u, double v) {
    return (A * u * v + B * G(u) * v + Ch * u * H(v) + D * G(u) * H(v)) / den;
  };
  node.partial_u = [=](double x, double v) {
    const double gx = g(x);
    return (A * v + B * gx * v + Ch * H(v) + D * gx * H(v)) / den;
  };
  node.partial_v = [=](double u, double y) {
    const double hy = h(y);
    return (A * u + B * G(u) + Ch * u * hy + D * G(u) * hy) / den;
  };
  return Copula::density_backed(std::move(node));
}

Copula make_cdf_copula(std::string name, Function2 cdf_fn) {
  TransformedNode node;
  node.name = std::move(name);
  node.cdf = std::move(cdf_fn);
  node.fd_density = false;
  return Copula::transformed(std::move(node));
}

}  // namespace copulab
