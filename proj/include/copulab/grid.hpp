#pragma once

#include "copulab/types.hpp"

#include <algorithm>
#include <cmath>

namespace copulab {

/// Result of checking the structural invariants of a grid copula.
struct GridCheck {
  double max_ground_error = 0.0;   // |C(0,y)|, |C(x,0)| on nodes
  double max_margin_error = 0.0;   // |C(1,y) - y|, |C(x,1) - x| on nodes
  double mass_error = 0.0;         // |(1-s) sum c*area + s - 1|
  double min_cell_density = 0.0;
  bool ok(double tol) const {
    return max_ground_error <= tol && max_margin_error <= tol && mass_error <= tol &&
           min_cell_density >= -tol;
  }
};

/// Copula discretised on an n x n uniform grid of the unit square.
///
/// The absolutely continuous part is piecewise constant per cell, so its CDF is exactly the
/// bilinear interpolant of its node values. A singular component s * M(u,v) (mass on the main
/// diagonal) is carried separately and never smeared into cells.
template <typename Scalar>
class BasicGridCopula {
 public:
  using MatrixType = MatrixX<Scalar>;

  BasicGridCopula() = default;

  /// `ac_cdf` holds the (n+1) x (n+1) node values of the CDF of the absolutely continuous
  /// measure (total mass 1 - s); `s` is the mass carried by the M component.
  BasicGridCopula(MatrixType ac_cdf, Scalar s) : ac_cdf_(std::move(ac_cdf)), s_(s) {
    if (ac_cdf_.rows() != ac_cdf_.cols() || ac_cdf_.rows() < 2) {
      throw DomainError("grid copula needs a square (n+1)x(n+1) node matrix with n >= 1");
    }
    if (!(s_ >= Scalar(0) && s_ <= Scalar(1) + Scalar(1e-12))) {
      throw DomainError("singular mass outside [0,1]");
    }
    s_ = std::min(s_, Scalar(1));
    const Eigen::Index n = ac_cdf_.rows() - 1;
    mass_ = ac_cdf_.bottomRightCorner(n, n) - ac_cdf_.topRightCorner(n, n) -
            ac_cdf_.bottomLeftCorner(n, n) + ac_cdf_.topLeftCorner(n, n);
  }

  /// Builds the grid from absolutely continuous cell masses (summing to 1 - s).
  static BasicGridCopula from_cell_mass(const MatrixType& mass, Scalar s) {
    const Eigen::Index n = mass.rows();
    MatrixType nodes = MatrixType::Zero(n + 1, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        nodes(i + 1, j + 1) = mass(i, j) + nodes(i, j + 1) + nodes(i + 1, j) - nodes(i, j);
      }
    }
    return BasicGridCopula(std::move(nodes), s);
  }

  int n() const { return static_cast<int>(ac_cdf_.rows()) - 1; }
  Scalar h() const { return Scalar(1) / Scalar(n()); }
  Scalar node(int i) const { return Scalar(i) / Scalar(n()); }
  Scalar singular_m_mass() const { return s_; }

  const MatrixType& ac_cdf_nodes() const { return ac_cdf_; }
  /// Absolutely continuous mass of every cell (rows: u, columns: v).
  const MatrixType& cell_mass() const { return mass_; }

  /// Full CDF at the nodes, including s * min(x_i, y_j).
  MatrixType cdf_nodes() const {
    MatrixType out = ac_cdf_;
    if (s_ > Scalar(0)) {
      for (int i = 0; i <= n(); ++i)
        for (int j = 0; j <= n(); ++j) out(i, j) += s_ * node(std::min(i, j));
    }
    return out;
  }

  /// Average density of the normalised absolutely continuous part in each cell.
  MatrixType cell_density() const {
    if (s_ >= Scalar(1)) return MatrixType::Zero(n(), n());
    return mass_ / (h() * h() * (Scalar(1) - s_));
  }

  /// Density of the absolutely continuous measure (weight 1 - s included) at (u, v).
  Scalar ac_density(Scalar u, Scalar v) const {
    return mass_(cell_index(u), cell_index(v)) / (h() * h());
  }

  Scalar ac_cdf(Scalar u, Scalar v) const {
    const int i = cell_index(u);
    const int j = cell_index(v);
    const Scalar fu = u * Scalar(n()) - Scalar(i);
    const Scalar fv = v * Scalar(n()) - Scalar(j);
    return (Scalar(1) - fu) * (Scalar(1) - fv) * ac_cdf_(i, j) + fu * (Scalar(1) - fv) * ac_cdf_(i + 1, j) +
           (Scalar(1) - fu) * fv * ac_cdf_(i, j + 1) + fu * fv * ac_cdf_(i + 1, j + 1);
  }

  Scalar cdf(Scalar u, Scalar v) const { return ac_cdf(u, v) + s_ * std::min(u, v); }

  /// dC/du at (u, v): P(V <= v | U = u).
  Scalar partial_u(Scalar u, Scalar v) const {
    const int i = cell_index(u);
    const int j = cell_index(v);
    const Scalar fv = v * Scalar(n()) - Scalar(j);
    const Scalar lower = ac_cdf_(i + 1, j) - ac_cdf_(i, j);
    const Scalar upper = ac_cdf_(i + 1, j + 1) - ac_cdf_(i, j + 1);
    const Scalar ac = ((Scalar(1) - fv) * lower + fv * upper) * Scalar(n());
    return ac + (v >= u ? s_ : Scalar(0));
  }

  /// dC/dv at (u, v): P(U <= u | V = v).
  Scalar partial_v(Scalar u, Scalar v) const {
    const int i = cell_index(u);
    const int j = cell_index(v);
    const Scalar fu = u * Scalar(n()) - Scalar(i);
    const Scalar left = ac_cdf_(i, j + 1) - ac_cdf_(i, j);
    const Scalar right = ac_cdf_(i + 1, j + 1) - ac_cdf_(i + 1, j);
    const Scalar ac = ((Scalar(1) - fu) * left + fu * right) * Scalar(n());
    return ac + (u >= v ? s_ : Scalar(0));
  }

  /// The normalised absolutely continuous part as a grid copula with s = 0.
  BasicGridCopula ac_normalized() const {
    if (s_ >= Scalar(1)) throw DomainError("grid copula has no absolutely continuous part");
    return BasicGridCopula(ac_cdf_ / (Scalar(1) - s_), Scalar(0));
  }

  GridCheck check() const {
    GridCheck r;
    const MatrixType full = cdf_nodes();
    for (int k = 0; k <= n(); ++k) {
      r.max_ground_error = std::max({r.max_ground_error, double(std::abs(full(0, k))),
                                     double(std::abs(full(k, 0)))});
      r.max_margin_error =
          std::max({r.max_margin_error, double(std::abs(full(n(), k) - node(k))),
                    double(std::abs(full(k, n()) - node(k)))});
    }
    r.mass_error = double(std::abs(mass_.sum() + s_ - Scalar(1)));
    r.min_cell_density = n() > 0 ? double(mass_.minCoeff() / (h() * h())) : 0.0;
    return r;
  }

  /// Cell containing x; the right edge x = 1 belongs to the last cell.
  int cell_index(Scalar x) const {
    const int i = static_cast<int>(std::floor(x * Scalar(n())));
    return std::clamp(i, 0, n() - 1);
  }

 private:
  MatrixType ac_cdf_;
  MatrixType mass_;
  Scalar s_ = Scalar(0);
};

using GridCopula = BasicGridCopula<double>;

}  // namespace copulab
