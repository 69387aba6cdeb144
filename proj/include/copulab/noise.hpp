#pragma once

#include "copulab/copula.hpp"

#include <string>
#include <vector>

namespace copulab {

/// Univariate continuous distribution: CDF, generalised inverse and density.
class Marginal {
 public:
  static Marginal uniform(double a = 0.0, double b = 1.0);
  static Marginal normal(double mu = 0.0, double sigma = 1.0);
  static Marginal exponential(double rate = 1.0);

  double cdf(double x) const;
  /// inf{x : F(x) >= q}; q = 0 and q = 1 give the ends of the support (possibly infinite).
  double inv_cdf(double q) const;
  double pdf(double x) const;

  bool is_standard_uniform() const { return kind_ == Kind::Uniform && p1_ == 0.0 && p2_ == 1.0; }
  const std::string& name() const { return name_; }

 private:
  enum class Kind { Uniform, Normal, Exponential };
  Marginal(Kind kind, double p1, double p2, std::string name)
      : kind_(kind), p1_(p1), p2_(p2), name_(std::move(name)) {}
  Kind kind_;
  double p1_;
  double p2_;
  std::string name_;
};

/// Parses `uniform:a,b`, `normal:mu,sigma` or `exponential:rate`.
Marginal parse_marginal(const std::string& text);

/// Standard normal CDF and quantile.
double normal_cdf(double z);
double normal_quantile(double q);

/// Irwin-Hall law of the sum of two independent Uniform(0,1) variables.
double irwin_hall2_cdf(double x);
double irwin_hall2_inv(double q);

/// Law of X + Z for independent X ~ base and Z ~ noise. The CDF is the quadrature
/// int_0^1 F_base(x - F_noise^{-1}(s)) ds; the sum of two standard uniforms uses the
/// Irwin-Hall closed form.
class ConvolvedMarginal {
 public:
  ConvolvedMarginal(Marginal base, Marginal noise);

  double cdf(double x) const;
  /// Throws MarginalMismatch when the bracketing search fails.
  double inv_cdf(double q) const;

  const Marginal& base() const { return base_; }
  const Marginal& noise() const { return noise_; }

 private:
  Marginal base_;
  Marginal noise_;
  bool irwin_hall_;
};

/// Copula of (X + Z, Y) for (X, Y) ~ C with margins F1, F2 and independent Z ~ F3.
Copula c5_general(const Copula& c, const Marginal& f1, const Marginal& f2, const Marginal& f3);
/// Copula of (X + Z, Y + Z).
Copula c6_general(const Copula& c, const Marginal& f1, const Marginal& f2, const Marginal& f3);
/// Copula of (X + Z1, Y + Z2) with Z1 ~ G1, Z2 ~ G2 independent of each other and of (X, Y).
Copula c7_general(const Copula& c, const Marginal& f1, const Marginal& f2, const Marginal& g1,
                  const Marginal& g2);

/// Closed form of the (X + Z, Y) copula for C = M and uniform margins (four branches).
double c5_closed_M_uniform(UnitPoint p);
/// Closed form of the (X + Z, Y + Z) copula for C = Pi and uniform margins, obtained from the
/// x-space case formulas by x = F4^{-1}(u), y = F4^{-1}(v).
double c6_closed_indep_uniform(UnitPoint p);
/// Region formulas for the (X + Z1, Y + Z2) copula with all margins uniform.
double c7_uniform_regions(const Copula& c, UnitPoint p);

Copula c5_m_uniform_model();
Copula c6_indep_uniform_model();

/// The eight-region (u, v) table for the C6 uniform case, evaluated literally, with the
/// region label that matched.
struct C6TableValue {
  double value = 0.0;
  char region = '?';
};
C6TableValue c6_table_as_printed(UnitPoint p);

struct C6TableDiscrepancy {
  double u = 0.0;
  double v = 0.0;
  char region = '?';
  double table = 0.0;
  double closed = 0.0;
  double quadrature = 0.0;
};

struct C6DiscrepancyReport {
  std::vector<C6TableDiscrepancy> rows;     // one per grid point
  std::vector<char> regions_disagreeing;    // regions with |table - quadrature| > tol
  double max_table_error = 0.0;
  double max_closed_error = 0.0;
  double tol = 0.0;
};

/// Compares the literal table and the closed form against quadrature on an n x n interior grid.
C6DiscrepancyReport c6_table_discrepancy(int n = 33, double tol = 1e-4);

enum class NoiseId { C5MUniform, C6IndepUniform, MControl };

struct TailPair {
  double lower = 0.0;
  double upper = 0.0;
};

TailPair tail_coeffs_of_noise(NoiseId id);

}  // namespace copulab
