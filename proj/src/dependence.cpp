#include "copulab/dependence.hpp"

#include "copulab/perturbations.hpp"
#include "copulab/products.hpp"
#include "copulab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace copulab {

namespace {

constexpr int kTailFirst = 6;
constexpr int kTailLast = 14;

/// int A dB for atomic terms A, B.
double concordance_integral(const Copula& a, const Copula& b, int intervals) {
  const auto along_main = [intervals](const Copula& x) {
    return quad::simpson([&](double t) { return cdf(x, t, t); }, 0.0, 1.0, intervals);
  };
  const auto along_anti = [intervals](const Copula& x) {
    return quad::simpson([&](double t) { return cdf(x, t, 1.0 - t); }, 0.0, 1.0, intervals);
  };
  if (b.as<FrechetMNode>()) return along_main(a);
  if (a.as<FrechetMNode>()) return along_main(b);
  if (b.as<FrechetWNode>()) return along_anti(a);
  if (a.as<FrechetWNode>()) return along_anti(b);
  return 0.5 - quad::simpson_2d(
                   [&](double u, double v) { return cond_cdf(a, u, v) * cond_cdf_v(b, u, v); },
                   intervals);
}

TailEstimate extrapolate(const std::vector<double>& ratios) {
  TailEstimate e;
  e.ratios = ratios;
  const std::size_t m = 4;
  std::vector<double> row(ratios.end() - m, ratios.end());
  std::vector<double> diagonal{row.back()};
  for (std::size_t level = 1; level < m; ++level) {
    const double f = std::pow(2.0, double(level));
    std::vector<double> next;
    for (std::size_t j = 1; j < row.size(); ++j) next.push_back((f * row[j] - row[j - 1]) / (f - 1.0));
    row = std::move(next);
    diagonal.push_back(row.back());
  }
  e.value = std::clamp(diagonal.back(), 0.0, 1.0);
  e.converged = std::abs(diagonal.back() - diagonal[diagonal.size() - 2]) <= 0.02;
  return e;
}

}  // namespace

std::string to_string(CoefficientName name) {
  switch (name) {
    case CoefficientName::SpearmanRho: return "spearman_rho";
    case CoefficientName::KendallTau: return "kendall_tau";
    case CoefficientName::BlomqvistBeta: return "blomqvist_beta";
    case CoefficientName::GiniGamma: return "gini_gamma";
    case CoefficientName::LambdaL: return "lambda_lower";
    case CoefficientName::LambdaU: return "lambda_upper";
  }
  return "?";
}

std::string to_string(CoefficientMethod method) {
  switch (method) {
    case CoefficientMethod::ClosedForm: return "closed_form";
    case CoefficientMethod::Quadrature: return "quadrature";
    case CoefficientMethod::Extrapolation: return "extrapolation";
  }
  return "?";
}

bool CoefficientReport::in_range() const {
  constexpr double slack = 1e-6;
  switch (name) {
    case CoefficientName::SpearmanRho:
    case CoefficientName::KendallTau:
    case CoefficientName::BlomqvistBeta: return value >= -1.0 - slack && value <= 1.0 + slack;
    case CoefficientName::GiniGamma: return value >= 1.0 - slack && value <= 3.0 + slack;
    case CoefficientName::LambdaL:
    case CoefficientName::LambdaU: return value >= -slack && value <= 1.0 + slack;
  }
  return false;
}

double spearman_rho(const Copula& c, int intervals) {
  // Linear in the mixture terms; M and W have a kink along a diagonal that tensor Simpson only
  // resolves to O(h^2), so their integrals (1/3, 1/6) are used directly.
  double integral = 0.0;
  for (const auto& [w, term] : flatten(c)) {
    if (term.as<FrechetMNode>()) integral += w / 3.0;
    else if (term.as<FrechetWNode>()) integral += w / 6.0;
    else if (term.as<PiNode>()) integral += w / 4.0;
    else integral += w * quad::simpson_2d([&](double u, double v) { return cdf(term, u, v); }, intervals);
  }
  return 12.0 * integral - 3.0;
}

double kendall_tau(const Copula& c, int intervals) {
  const auto terms = flatten(c);
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i; j < terms.size(); ++j) {
      const double w = terms[i].first * terms[j].first * (i == j ? 1.0 : 2.0);
      sum += w * concordance_integral(terms[i].second, terms[j].second, intervals);
    }
  }
  return 4.0 * sum - 1.0;
}

double blomqvist_beta(const Copula& c) { return 4.0 * cdf(c, 0.5, 0.5) - 1.0; }

double gini_gamma(const Copula& c, int intervals) {
  return 4.0 * quad::simpson([&](double u) { return cdf(c, u, u) + cdf(c, u, 1.0 - u); }, 0.0,
                             1.0, intervals);
}

TailEstimate tail_lower_estimate(const Copula& c) {
  std::vector<double> ratios;
  for (int k = kTailFirst; k <= kTailLast; ++k) {
    const double u = std::ldexp(1.0, -k);
    ratios.push_back(cdf(c, u, u) / u);
  }
  return extrapolate(ratios);
}

TailEstimate tail_upper_estimate(const Copula& c) {
  std::vector<double> ratios;
  for (int k = kTailFirst; k <= kTailLast; ++k) {
    const double e = std::ldexp(1.0, -k);
    const double u = 1.0 - e;
    ratios.push_back((cdf(c, u, u) - 1.0 + 2.0 * e) / e);
  }
  return extrapolate(ratios);
}

double tail_lower(const Copula& c) { return tail_lower_estimate(c).value; }
double tail_upper(const Copula& c) { return tail_upper_estimate(c).value; }

std::vector<CoefficientReport> all_coefficients(const Copula& c) {
  std::vector<CoefficientReport> out;
  out.push_back({CoefficientName::SpearmanRho, spearman_rho(c), CoefficientMethod::Quadrature, 256, 1e-6});
  out.push_back({CoefficientName::KendallTau, kendall_tau(c), CoefficientMethod::Quadrature, 256, 1e-4});
  out.push_back({CoefficientName::BlomqvistBeta, blomqvist_beta(c), CoefficientMethod::ClosedForm, 0, 0.0});
  out.push_back({CoefficientName::GiniGamma, gini_gamma(c), CoefficientMethod::Quadrature, 512, 1e-6});
  const TailEstimate lo = tail_lower_estimate(c);
  const TailEstimate up = tail_upper_estimate(c);
  out.push_back({CoefficientName::LambdaL, lo.value, CoefficientMethod::Extrapolation, kTailLast, 0.02, lo.converged});
  out.push_back({CoefficientName::LambdaU, up.value, CoefficientMethod::Extrapolation, kTailLast, 0.02, up.converged});
  return out;
}

IdentityReport perturbation_identities(const Copula& c, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
  struct Coeffs {
    double rho, gamma, beta, lu, ll;
  };
  const auto coeffs = [](const Copula& x) {
    return Coeffs{spearman_rho(x), gini_gamma(x), blomqvist_beta(x), tail_upper(x), tail_lower(x)};
  };
  const Coeffs base = coeffs(c);
  const Coeffs t = coeffs(tilde(c, theta));
  const Coeffs h = coeffs(hat(c, theta));
  const double k = 1.0 - theta;
  IdentityReport r;
  r.theta = theta;
  const auto add = [&r](std::string name, double lhs, double predicted) {
    r.checks.push_back({std::move(name), lhs, predicted, std::abs(lhs - predicted)});
    r.max_discrepancy = std::max(r.max_discrepancy, r.checks.back().discrepancy);
  };
  add("spearman_rho/tilde", t.rho, k * base.rho);
  add("gini_gamma/tilde", t.gamma, k * base.gamma + 2.0 * theta);
  add("blomqvist_beta/tilde", t.beta, k * base.beta);
  add("lambda_upper/tilde", t.lu, k * base.lu);
  add("lambda_lower/tilde", t.ll, k * base.ll);
  add("spearman_rho/hat", h.rho, k * base.rho + theta);
  add("gini_gamma/hat", h.gamma, k * base.gamma + 3.0 * theta);
  add("blomqvist_beta/hat", h.beta, k * base.beta + theta);
  add("lambda_upper/hat", h.lu, k * base.lu + theta);
  add("lambda_lower/hat", h.ll, k * base.ll + theta);
  return r;
}

}  // namespace copulab
