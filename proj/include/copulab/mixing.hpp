#pragma once

#include "copulab/copula.hpp"
#include "copulab/perturbations.hpp"
#include "copulab/products.hpp"

#include <vector>

namespace copulab {

constexpr int kDefaultMixingGrid = 512;
/// Coefficients below this value are reported as 0.
constexpr double kMixingFloor = 1e-10;

/// Absolutely continuous density of a model on the midpoints of an n x n grid (weights of
/// mixtures included, so it integrates to one minus the singular mass), plus the conditional
/// atoms on y = x and y = 1 - x for every row.
struct DensityTable {
  int n = 0;
  Matrix density;
  Vector main_atom;
  Vector anti_atom;

  double h() const { return 1.0 / n; }
  bool has_atoms() const { return main_atom.maxCoeff() > 0.0 || anti_atom.maxCoeff() > 0.0; }
};

/// Throws NoDensity for models with no evaluable density.
DensityTable density_table(const Copula& c, int n = kDefaultMixingGrid);

/// int_0^1 [atoms(x) + int_0^1 (c(x,y) - 1)^+ dy] dx.
double beta_coeff(const Copula& c, int n = kDefaultMixingGrid);
/// sup_x of the same row bracket; rows are refined locally around the best row and at x = 0, 1.
double phi_coeff(const Copula& c, int n = kDefaultMixingGrid);
/// Infinity when the model has an atom, otherwise sup |c - 1| with a 17 x 17 local refinement
/// around the worst cell.
double psi_coeff(const Copula& c, int n = kDefaultMixingGrid);

double beta_coeff(const DensityTable& t);
double phi_coeff(const DensityTable& t);
double psi_coeff(const DensityTable& t);

struct MixingReport {
  double beta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  int grid = 0;

  /// beta <= phi <= psi (within tol).
  bool ordered(double tol = 1e-9) const;
};

MixingReport mixing_coefficients(const Copula& c, int n = kDefaultMixingGrid);

struct DecayRow {
  int n = 0;
  double beta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double predicted_beta = 0.0;
};

struct DecayTable {
  std::vector<DecayRow> rows;
  PerturbationParams perturbation;
  double fitted_rate = 0.0;
  double r_squared = 0.0;
  int fold_grid = 0;
  int mixing_grid = 0;
};

/// beta/phi/psi of the copula of (X_0, X_n), n = 1..n_max, for the chain driven by the
/// perturbed copula. The predicted column is (1-theta)^n beta(C^n) for tilde,
/// theta^n + binomial_average(beta(C^i), 1-theta, n) for hat (an upper bound), beta(C^n) for
/// none and NaN for mesiar/dolati.
DecayTable decay_table(const Copula& c, const PerturbationParams& p, int n_max,
                       int fold_grid = kDefaultChainGrid, int mixing_grid = kDefaultMixingGrid);

struct RateFit {
  double rate = 0.0;
  double r_squared = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of log(seq_n) = intercept + n log(rate), n = 1, 2, ...
/// Throws NonPositive when an entry is <= 0 and DomainError for fewer than three entries.
RateFit geometric_rate_fit(const std::vector<double>& seq);

}  // namespace copulab
