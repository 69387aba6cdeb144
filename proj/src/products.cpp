#include "copulab/products.hpp"

#include "copulab/format.hpp"
#include "copulab/quadrature.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace copulab {

namespace {

int resolution_of(const Copula& c) {
  if (const auto* g = c.as<GridNode>()) return g->grid.n();
  return 0;
}

Matrix cdf_on_nodes(const Copula& c, int n) {
  Matrix out(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) out(i, j) = cdf(c, double(i) / n, double(j) / n);
  return out;
}

Matrix kernel_fold(const Copula& a, const Copula& b, int n) {
  const int m = 2 * n;
  const Vector t = quad::uniform_nodes(m);
  const Vector w = quad::simpson_weights(m);
  Matrix ka(n + 1, m + 1);
  Matrix kb(m + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= m; ++k) ka(i, k) = cond_cdf_v(a, double(i) / n, t[k]);
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j <= n; ++j) kb(k, j) = cond_cdf(b, t[k], double(j) / n);
  return ka * w.asDiagonal() * kb;
}

Matrix difference_fold(const Copula& a, const Copula& b, int n) {
  int m = n;
  for (int r : {resolution_of(a), resolution_of(b)}) {
    if (r <= 0) continue;
    const int l = std::lcm(m, r);
    m = l <= 2048 ? l : std::max(m, r);
  }
  Matrix da(n + 1, m);
  Matrix db(m, n + 1);
  for (int i = 0; i <= n; ++i) {
    double prev = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double cur = cdf(a, double(i) / n, double(k) / m);
      da(i, k - 1) = cur - prev;
      prev = cur;
    }
  }
  for (int j = 0; j <= n; ++j) {
    double prev = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double cur = cdf(b, double(k) / m, double(j) / n);
      db(k - 1, j) = cur - prev;
      prev = cur;
    }
  }
  return (da * db) * double(m);
}

void project_boundary(Matrix& nodes) {
  const int n = static_cast<int>(nodes.rows()) - 1;
  for (int k = 0; k <= n; ++k) {
    nodes(0, k) = 0.0;
    nodes(k, 0) = 0.0;
    nodes(n, k) = double(k) / n;
    nodes(k, n) = double(k) / n;
  }
}

Matrix pi_nodes(int n) {
  Matrix out(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) out(i, j) = (double(i) / n) * (double(j) / n);
  return out;
}

double binom_weight(int n, int k, double theta) {
  if (k < 0 || k > n) return 0.0;
  const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  double log_w = log_c;
  if (k > 0) {
    if (theta <= 0.0) return 0.0;
    log_w += k * std::log(theta);
  }
  if (n - k > 0) {
    if (theta >= 1.0) return 0.0;
    log_w += (n - k) * std::log1p(-theta);
  }
  return std::exp(log_w);
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
}

}  // namespace

int default_fold_grid(int n) { return n > 4 ? kDefaultChainGrid : kDefaultFoldGrid; }

Copula FoldResult::model() const {
  std::string name;
  for (std::size_t k = 0; k < operands.size(); ++k) name += (k ? "*" : "") + operands[k];
  if (n > 1 && operands.size() == 1) name += "^" + std::to_string(n);
  return Copula::grid(grid, name);
}

std::vector<std::pair<double, Copula>> flatten(const Copula& c) {
  std::vector<std::pair<double, Copula>> out;
  const auto push = [&out](double w, const Copula& term) {
    if (w <= 0.0) return;
    for (auto& [ow, oc] : out) {
      if ((term.as<FrechetMNode>() && oc.as<FrechetMNode>()) ||
          (term.as<PiNode>() && oc.as<PiNode>())) {
        ow += w;
        return;
      }
    }
    out.emplace_back(w, term);
  };
  if (const auto* mix = c.as<MixtureNode>()) {
    for (std::size_t k = 0; k < mix->weights.size(); ++k)
      for (const auto& [w, term] : flatten(mix->components[k])) push(mix->weights[k] * w, term);
  } else if (const auto* g = c.as<GridNode>()) {
    const double s = g->grid.singular_m_mass();
    if (s >= 1.0) {
      push(1.0, Copula::frechet_m());
    } else if (s > 0.0) {
      push(s, Copula::frechet_m());
      push(1.0 - s, Copula::grid(g->grid.ac_normalized(), g->name + ".ac"));
    } else {
      push(1.0, c);
    }
  } else {
    push(1.0, c);
  }
  return out;
}

FoldResult fold(const Copula& a, const Copula& b, int n_grid) {
  if (n_grid < kMinFoldGrid) {
    throw ResolutionTooLow("fold needs n_grid >= " + std::to_string(kMinFoldGrid) + ", got " +
                           std::to_string(n_grid));
  }
  const auto terms_a = flatten(a);
  const auto terms_b = flatten(b);
  Matrix ac = Matrix::Zero(n_grid + 1, n_grid + 1);
  double s = 0.0;
  for (const auto& [wa, ta] : terms_a) {
    for (const auto& [wb, tb] : terms_b) {
      const double w = wa * wb;
      const bool ma = ta.as<FrechetMNode>() != nullptr;
      const bool mb = tb.as<FrechetMNode>() != nullptr;
      Matrix part;
      if (ma && mb) {
        s += w;
        continue;
      } else if (ma) {
        part = cdf_on_nodes(tb, n_grid);
      } else if (mb) {
        part = cdf_on_nodes(ta, n_grid);
      } else if (ta.as<PiNode>() || tb.as<PiNode>()) {
        part = pi_nodes(n_grid);
      } else if (has_smooth_kernels(ta) && has_smooth_kernels(tb)) {
        part = kernel_fold(ta, tb, n_grid);
        project_boundary(part);
      } else {
        part = difference_fold(ta, tb, n_grid);
        project_boundary(part);
      }
      ac += w * part;
    }
  }
  FoldResult r{GridCopula(std::move(ac), std::min(s, 1.0)), {a.name(), b.name()}, 2};
  return r;
}

FoldResult n_fold(const Copula& c, int n, int n_grid) {
  if (n < 1) throw DomainError("n_fold needs n >= 1");
  const int grid = n_grid > 0 ? n_grid : default_fold_grid(n);
  if (grid < kMinFoldGrid) throw ResolutionTooLow("n_fold needs n_grid >= 16");
  if (n == 1) return FoldResult{to_grid(c, grid), {c.name()}, 1};
  Copula current = c;
  FoldResult r;
  for (int k = 2; k <= n; ++k) {
    r = fold(current, c, grid);
    r.operands = {c.name()};
    r.n = k;
    current = r.model();
  }
  return r;
}

std::vector<Copula> fold_powers(const Copula& c, int n_max, int n_grid) {
  if (n_max < 1) throw DomainError("fold_powers needs n_max >= 1");
  if (n_grid < kMinFoldGrid) throw ResolutionTooLow("fold_powers needs n_grid >= 16");
  std::vector<Copula> out{c};
  for (int k = 2; k <= n_max; ++k) {
    FoldResult r = fold(out.back(), c, n_grid);
    r.operands = {c.name()};
    r.n = k;
    out.push_back(r.model());
  }
  return out;
}

GridCopula to_grid(const Copula& c, int n_grid) {
  if (n_grid < 1) throw DomainError("to_grid needs n_grid >= 1");
  if (const auto* g = c.as<GridNode>()) {
    if (g->grid.n() == n_grid) return g->grid;
  }
  Matrix ac = Matrix::Zero(n_grid + 1, n_grid + 1);
  double s = 0.0;
  for (const auto& [w, term] : flatten(c)) {
    if (term.as<FrechetMNode>()) {
      s += w;
    } else if (term.as<PiNode>()) {
      ac += w * pi_nodes(n_grid);
    } else {
      ac += w * cdf_on_nodes(term, n_grid);
    }
  }
  return GridCopula(std::move(ac), std::min(s, 1.0));
}

GridCopula combine(const std::vector<double>& weights, const std::vector<GridCopula>& grids) {
  if (weights.size() != grids.size() || grids.empty()) {
    throw DomainError("combine needs one weight per grid");
  }
  const int n = grids.front().n();
  Matrix ac = Matrix::Zero(n + 1, n + 1);
  double s = 0.0;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    if (grids[k].n() != n) throw DomainError("combine needs grids of equal resolution");
    ac += weights[k] * grids[k].ac_cdf_nodes();
    s += weights[k] * grids[k].singular_m_mass();
  }
  return GridCopula(std::move(ac), std::clamp(s, 0.0, 1.0));
}

GridCopula binomial_mixture_power(const Copula& a, const Copula& b, double theta, int n,
                                  int n_grid) {
  check_theta(theta);
  if (n < 1) throw DomainError("binomial_mixture_power needs n >= 1");
  if (is_absolutely_continuous(a) && is_absolutely_continuous(b)) {
    const Matrix ab = fold(a, b, n_grid).grid.cdf_nodes();
    const Matrix ba = fold(b, a, n_grid).grid.cdf_nodes();
    const double gap = (ab - ba).cwiseAbs().maxCoeff();
    if (gap > 1e-5) {
      throw NonCommuting(a.name() + " and " + b.name() + " do not commute (sup gap " +
                         detail::num(gap) + ")");
    }
  }
  std::vector<Copula> pa{Copula::frechet_m()};
  std::vector<Copula> pb{Copula::frechet_m()};
  std::vector<double> weights;
  std::vector<GridCopula> grids;
  for (int k = 0; k <= n; ++k) {
    const double w = binom_weight(n, k, theta);
    if (w == 0.0) continue;
    while (static_cast<int>(pa.size()) <= k) {
      pa.push_back(pa.size() == 1 ? a : fold(pa.back(), a, n_grid).model());
    }
    while (static_cast<int>(pb.size()) <= n - k) {
      pb.push_back(pb.size() == 1 ? b : fold(pb.back(), b, n_grid).model());
    }
    weights.push_back(w);
    grids.push_back(fold(pa[k], pb[n - k], n_grid).grid);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return combine(weights, grids);
}

Copula joint_tilde(const Copula& c, double theta, int n, int n_grid) {
  check_theta(theta);
  if (n < 1) throw DomainError("joint_tilde needs n >= 1");
  const int grid = n_grid > 0 ? n_grid : default_fold_grid(n);
  return joint_tilde(fold_powers(c, n, grid), theta, n);
}

Copula joint_tilde(const std::vector<Copula>& powers, double theta, int n) {
  check_theta(theta);
  if (n < 1 || static_cast<int>(powers.size()) < n) {
    throw DomainError("joint_tilde needs the first n powers");
  }
  const double w = std::pow(1.0 - theta, n);
  return Copula::mixture({w, 1.0 - w}, {powers[n - 1], Copula::pi()},
                         "joint_tilde(" + detail::num(theta) + "," + std::to_string(n) + ")");
}

Copula joint_hat(const Copula& c, double theta, int n, int n_grid) {
  check_theta(theta);
  if (n < 1) throw DomainError("joint_hat needs n >= 1");
  const int grid = n_grid > 0 ? n_grid : default_fold_grid(n);
  return joint_hat(fold_powers(c, n, grid), theta, n);
}

Copula joint_hat(const std::vector<Copula>& powers, double theta, int n) {
  check_theta(theta);
  if (n < 1 || static_cast<int>(powers.size()) < n) {
    throw DomainError("joint_hat needs the first n powers");
  }
  std::vector<double> weights;
  std::vector<Copula> parts;
  double total = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double w = binom_weight(n, i, 1.0 - theta);
    weights.push_back(w);
    parts.push_back(powers[i - 1]);
    total += w;
  }
  weights.push_back(std::pow(theta, n));
  parts.push_back(Copula::frechet_m());
  total += weights.back();
  for (double& w : weights) w /= total;
  return Copula::mixture(std::move(weights), std::move(parts),
                         "joint_hat(" + detail::num(theta) + "," + std::to_string(n) + ")");
}

double binomial_average(const std::vector<double>& a, double theta, int n) {
  if (n < 1) throw DomainError("binomial_average needs n >= 1");
  if (static_cast<int>(a.size()) < n) throw DomainError("binomial_average needs n terms");
  check_theta(theta);
  // lgamma rounding grows with n; dividing by the full binomial total cancels the common part.
  double sum = 0.0;
  double total = binom_weight(n, 0, theta);
  for (int i = 1; i <= n; ++i) {
    const double w = binom_weight(n, i, theta);
    sum += w * a[i - 1];
    total += w;
  }
  return sum / total;
}

void write_grid_csv(std::ostream& out, const GridCopula& grid) {
  const int n = grid.n();
  const Matrix full = grid.cdf_nodes();
  const Matrix dens = grid.cell_density();
  const std::string s = detail::num(grid.singular_m_mass(), 17);
  out << "x,y,cdf,density,singular_m_mass\n";
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double d = (i < n && j < n) ? dens(i, j) : 0.0;
      out << detail::num(grid.node(i), 17) << ',' << detail::num(grid.node(j), 17) << ','
          << detail::num(full(i, j), 17) << ',' << detail::num(d, 17) << ',' << s << '\n';
    }
  }
}

GridCopula read_grid_csv(std::istream& in) {
  std::string line;
  std::vector<double> cdf_values;
  double s = 0.0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("x,y,cdf", 0) != 0) throw SpecError("grid CSV: missing header row");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<double> row;
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    if (row.size() != 5) throw SpecError("grid CSV: expected 5 fields in '" + line + "'");
    cdf_values.push_back(row[2]);
    s = row[4];
  }
  const auto side = static_cast<int>(std::lround(std::sqrt(double(cdf_values.size()))));
  if (side < 2 || side * side != static_cast<int>(cdf_values.size())) {
    throw SpecError("grid CSV: node count is not a square");
  }
  const int n = side - 1;
  Matrix ac(side, side);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      ac(i, j) = cdf_values[i * side + j] - s * double(std::min(i, j)) / n;
  return GridCopula(std::move(ac), s);
}

}  // namespace copulab
