#pragma once

#include "copulab/copula.hpp"
#include "copulab/grid.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace copulab {

constexpr int kDefaultFoldGrid = 256;
constexpr int kDefaultChainGrid = 128;
constexpr int kMinFoldGrid = 16;

/// Grid used by n_fold when none is given: 256 for n <= 4, 128 beyond.
int default_fold_grid(int n);

struct FoldResult {
  GridCopula grid;
  std::vector<std::string> operands;
  int n = 1;

  Copula model() const;
};

/// A model flattened into weighted atomic terms: mixtures are expanded and grids with a
/// singular part are split into their M and absolutely continuous pieces.
std::vector<std::pair<double, Copula>> flatten(const Copula& c);

/// Fold product A*B on an n_grid x n_grid node grid.
///
/// M is folded as the identity and Pi as the annihilator. Remaining pairs use the kernel
/// form int A_{,2}(x,t) B_{,1}(t,y) dt with Simpson weights when both kernels are smooth,
/// and a cell-difference form (exact for piecewise constant kernels) otherwise.
FoldResult fold(const Copula& a, const Copula& b, int n_grid = kDefaultFoldGrid);

/// C^n by repeated right multiplication. n_grid <= 0 selects default_fold_grid(n).
FoldResult n_fold(const Copula& c, int n, int n_grid = 0);

/// C, C^2, ..., C^n_max as models (C itself first, grids afterwards).
std::vector<Copula> fold_powers(const Copula& c, int n_max, int n_grid);

/// Samples a model onto a grid copula; the M mass of grid and mixture terms is kept exact.
GridCopula to_grid(const Copula& c, int n_grid);

/// Convex combination of grid copulas of equal resolution.
GridCopula combine(const std::vector<double>& weights, const std::vector<GridCopula>& grids);

/// sum_k binom(n,k) theta^k (1-theta)^{n-k} A^k * B^{n-k}. Throws NonCommuting when both
/// operands are absolutely continuous and |A*B - B*A| exceeds 1e-5 at some node.
GridCopula binomial_mixture_power(const Copula& a, const Copula& b, double theta, int n,
                                  int n_grid = kDefaultFoldGrid);

/// Copula of (X_0, X_n) for the chain driven by (1-theta) C + theta Pi:
/// (1-theta)^n C^n + (1 - (1-theta)^n) Pi.
Copula joint_tilde(const Copula& c, double theta, int n, int n_grid = 0);
/// Same, reusing powers[i-1] = C^i.
Copula joint_tilde(const std::vector<Copula>& powers, double theta, int n);

/// Copula of (X_0, X_n) for the chain driven by (1-theta) C + theta M:
/// sum_{i=1}^n binom(n,i) theta^{n-i} (1-theta)^i C^i + theta^n M.
Copula joint_hat(const Copula& c, double theta, int n, int n_grid = 0);
Copula joint_hat(const std::vector<Copula>& powers, double theta, int n);

/// b_n = sum_{i=1}^n binom(n,i) theta^i (1-theta)^{n-i} a_i with a[0] = a_1. Weights are
/// formed in log space.
double binomial_average(const std::vector<double>& a, double theta, int n);

/// Node dump with header `x,y,cdf,density,singular_m_mass`. `density` is the normalised
/// absolutely continuous density of the cell whose lower-left corner is the node (0 on the
/// last row and column).
void write_grid_csv(std::ostream& out, const GridCopula& grid);
GridCopula read_grid_csv(std::istream& in);

}  // namespace copulab
