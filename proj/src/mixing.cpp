#include "copulab/mixing.hpp"

#include "copulab/format.hpp"

#include <cmath>
#include <limits>

namespace copulab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double floor_small(double x) { return x < kMixingFloor ? 0.0 : x; }

double row_bracket(const DensityTable& t, int i) {
  double sum = 0.0;
  for (int j = 0; j < t.n; ++j) sum += std::max(t.density(i, j) - 1.0, 0.0);
  return t.main_atom[i] + t.anti_atom[i] + sum * t.h();
}

/// Row bracket at an arbitrary x, from the model itself.
double row_bracket_at(const Copula& c, double x, int n) {
  const double h = 1.0 / n;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += std::max(density(c, x, (j + 0.5) * h).value - 1.0, 0.0);
  const Atoms a = atoms(c, x);
  return a.main + a.anti + sum * h;
}

void add_term(DensityTable& t, double w, const Copula& term) {
  const int n = t.n;
  const double h = t.h();
  if (term.as<FrechetMNode>()) {
    t.main_atom.array() += w;
    return;
  }
  if (term.as<FrechetWNode>()) {
    t.anti_atom.array() += w;
    return;
  }
  if (term.as<PiNode>()) {
    t.density.array() += w;
    return;
  }
  if (const auto* g = term.as<GridNode>()) {
    if (g->grid.n() == n) {
      t.density += w * g->grid.cell_mass() / (h * h);
      return;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * h;
    for (int j = 0; j < n; ++j) t.density(i, j) += w * density(term, x, (j + 0.5) * h).value;
    const Atoms a = atoms(term, x);
    t.main_atom[i] += w * a.main;
    t.anti_atom[i] += w * a.anti;
  }
}

}  // namespace

DensityTable density_table(const Copula& c, int n) {
  if (n < 2) throw DomainError("density table needs n >= 2");
  DensityTable t;
  t.n = n;
  t.density = Matrix::Zero(n, n);
  t.main_atom = Vector::Zero(n);
  t.anti_atom = Vector::Zero(n);
  for (const auto& [w, term] : flatten(c)) add_term(t, w, term);
  return t;
}

double beta_coeff(const DensityTable& t) {
  double sum = 0.0;
  for (int i = 0; i < t.n; ++i) sum += row_bracket(t, i);
  return floor_small(sum * t.h());
}

double phi_coeff(const DensityTable& t) {
  double best = 0.0;
  for (int i = 0; i < t.n; ++i) best = std::max(best, row_bracket(t, i));
  return floor_small(best);
}

double psi_coeff(const DensityTable& t) {
  if (t.has_atoms()) return kInf;
  return floor_small((t.density.array() - 1.0).abs().maxCoeff());
}

double beta_coeff(const Copula& c, int n) { return beta_coeff(density_table(c, n)); }

double phi_coeff(const Copula& c, int n) {
  const DensityTable t = density_table(c, n);
  int best_row = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double r = row_bracket(t, i);
    if (r > best) {
      best = r;
      best_row = i;
    }
  }
  const double h = t.h();
  best = std::max({best, row_bracket_at(c, 0.0, n), row_bracket_at(c, 1.0, n)});
  for (int k = 0; k <= 16; ++k) {
    const double x = clamp01(best_row * h + k * h / 16.0);
    best = std::max(best, row_bracket_at(c, x, n));
  }
  return floor_small(best);
}

double psi_coeff(const Copula& c, int n) {
  const DensityTable t = density_table(c, n);
  if (t.has_atoms()) return kInf;
  Eigen::Index bi = 0, bj = 0;
  double best = (t.density.array() - 1.0).abs().maxCoeff(&bi, &bj);
  const double h = t.h();
  for (int a = 0; a <= 16; ++a) {
    for (int b = 0; b <= 16; ++b) {
      const double x = clamp01(bi * h + a * h / 16.0);
      const double y = clamp01(bj * h + b * h / 16.0);
      best = std::max(best, std::abs(density(c, x, y).value - 1.0));
    }
  }
  return floor_small(best);
}

bool MixingReport::ordered(double tol) const {
  return beta <= phi + tol && phi <= psi + tol;
}

MixingReport mixing_coefficients(const Copula& c, int n) {
  return {beta_coeff(c, n), phi_coeff(c, n), psi_coeff(c, n), n};
}

DecayTable decay_table(const Copula& c, const PerturbationParams& p, int n_max, int fold_grid,
                       int mixing_grid) {
  if (n_max < 1 || n_max > 8) throw DomainError("decay_table supports 1 <= n_max <= 8");
  DecayTable table;
  table.perturbation = p;
  table.fold_grid = fold_grid;
  table.mixing_grid = mixing_grid;

  const bool mixture_kind = p.kind == PerturbationKind::None ||
                            p.kind == PerturbationKind::TildePi || p.kind == PerturbationKind::HatM;
  const Copula driver = mixture_kind ? c : apply(c, p);
  const std::vector<Copula> powers = fold_powers(driver, n_max, fold_grid);
  std::vector<double> base_beta;
  if (p.kind == PerturbationKind::TildePi || p.kind == PerturbationKind::HatM) {
    for (const Copula& power : powers) base_beta.push_back(beta_coeff(power, mixing_grid));
  }

  for (int n = 1; n <= n_max; ++n) {
    Copula joint = powers[n - 1];
    double predicted = std::numeric_limits<double>::quiet_NaN();
    switch (p.kind) {
      case PerturbationKind::TildePi:
        joint = joint_tilde(powers, p.theta, n);
        predicted = std::pow(1.0 - p.theta, n) * base_beta[n - 1];
        break;
      case PerturbationKind::HatM:
        joint = joint_hat(powers, p.theta, n);
        predicted = std::pow(p.theta, n) +
                    (p.theta < 1.0 ? binomial_average(base_beta, 1.0 - p.theta, n) : 0.0);
        break;
      default: break;
    }
    const MixingReport m = mixing_coefficients(joint, mixing_grid);
    if (p.kind == PerturbationKind::None) predicted = m.beta;
    table.rows.push_back({n, m.beta, m.phi, m.psi, predicted});
  }

  std::vector<double> seq;
  for (const DecayRow& r : table.rows) {
    if (r.beta > 1e-12) seq.push_back(r.beta);
  }
  if (seq.size() >= 3) {
    const RateFit fit = geometric_rate_fit(seq);
    table.fitted_rate = fit.rate;
    table.r_squared = fit.r_squared;
  } else {
    table.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    table.r_squared = std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

RateFit geometric_rate_fit(const std::vector<double>& seq) {
  if (seq.size() < 3) throw DomainError("geometric_rate_fit needs at least three entries");
  for (double x : seq) {
    if (!(x > 0.0)) throw NonPositive("geometric_rate_fit: entry " + detail::num(x) + " is not positive");
  }
  const int m = static_cast<int>(seq.size());
  double mx = 0.0, my = 0.0;
  for (int k = 0; k < m; ++k) {
    mx += k + 1;
    my += std::log(seq[k]);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int k = 0; k < m; ++k) {
    const double dx = k + 1 - mx;
    const double dy = std::log(seq[k]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  RateFit fit;
  fit.rate = std::exp(slope);
  fit.intercept = my - slope * mx;
  const double ss_res = syy - slope * sxy;
  fit.r_squared = syy > 0.0 ? 1.0 - std::max(ss_res, 0.0) / syy : 1.0;
  return fit;
}

}  // namespace copulab
