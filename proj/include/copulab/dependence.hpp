#pragma once

#include "copulab/copula.hpp"

#include <string>
#include <vector>

namespace copulab {

enum class CoefficientName { SpearmanRho, KendallTau, BlomqvistBeta, GiniGamma, LambdaL, LambdaU };
enum class CoefficientMethod { ClosedForm, Quadrature, Extrapolation };

std::string to_string(CoefficientName name);
std::string to_string(CoefficientMethod method);

struct CoefficientReport {
  CoefficientName name = CoefficientName::SpearmanRho;
  double value = 0.0;
  CoefficientMethod method = CoefficientMethod::Quadrature;
  int grid = 0;
  double tol = 0.0;
  bool converged = true;

  /// Admissible range of the named coefficient, with 1e-6 slack.
  bool in_range() const;
};

/// 12 int int C - 3 by tensor Simpson.
double spearman_rho(const Copula& c, int intervals = 256);
/// 4 int C dC - 1, expanded over the flattened terms of the model. Singular terms enter
/// through int A dM = int A(t,t) dt and int A dW = int A(t,1-t) dt; absolutely continuous
/// pairs use int A dB = 1/2 - int int A_{,1} B_{,2}.
double kendall_tau(const Copula& c, int intervals = 256);
double blomqvist_beta(const Copula& c);
/// 4 int_0^1 C(u,u) + C(u,1-u) du, uncentred.
double gini_gamma(const Copula& c, int intervals = 512);

struct TailEstimate {
  double value = 0.0;
  bool converged = true;
  std::vector<double> ratios;  // ratio at u = 2^-k (or 1 - 2^-k), k = 6..14
};

/// Iterated Richardson extrapolation of the diagonal ratio over u = 2^-k, k = 6..14, using
/// the last four samples; clamped to [0,1]. Not converged when successive extrapolants
/// differ by more than 0.02.
TailEstimate tail_lower_estimate(const Copula& c);
TailEstimate tail_upper_estimate(const Copula& c);
double tail_lower(const Copula& c);
double tail_upper(const Copula& c);

std::vector<CoefficientReport> all_coefficients(const Copula& c);

struct IdentityCheck {
  std::string name;
  double lhs = 0.0;        // coefficient of the perturbed copula
  double predicted = 0.0;  // value predicted from the base coefficient
  double discrepancy = 0.0;
};

struct IdentityReport {
  double theta = 0.0;
  std::vector<IdentityCheck> checks;  // five for tilde, then five for hat
  double max_discrepancy = 0.0;
};

/// Coefficients of tilde(C, theta) and hat(C, theta) against their linear predictions from C.
IdentityReport perturbation_identities(const Copula& c, double theta);

}  // namespace copulab
