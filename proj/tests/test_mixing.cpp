#include "copulab/mixing.hpp"
#include "copulab/perturbations.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace copulab;

TEST(Beta, Examples) {
  EXPECT_EQ(beta_coeff(Copula::pi()), 0.0);
  EXPECT_NEAR(beta_coeff(Copula::frechet_m()), 1.0, 1e-12);
  const double oracle_beta =
      0.5 * oracle::midpoint_2d([](double u, double v) { return std::abs(oracle::fgm_density(0.8, u, v) - 1.0); }, 500);
  EXPECT_NEAR(oracle_beta, 0.1, 1e-5);
  EXPECT_NEAR(beta_coeff(Copula::fgm(0.8)), oracle_beta, 1e-4);
}

TEST(Phi, Examples) {
  EXPECT_EQ(phi_coeff(Copula::pi()), 0.0);
  EXPECT_NEAR(phi_coeff(Copula::fgm(0.8)), 0.2, 1e-3);
  EXPECT_NEAR(phi_coeff(hat(Copula::pi(), 0.4)), 0.4, 1e-12);
}

TEST(Psi, Examples) {
  EXPECT_EQ(psi_coeff(Copula::pi()), 0.0);
  EXPECT_NEAR(psi_coeff(Copula::fgm(0.8)), 0.8, 1e-3);
  EXPECT_TRUE(std::isinf(psi_coeff(hat(Copula::frank(3), 0.1))));
  EXPECT_TRUE(std::isinf(psi_coeff(Copula::frechet_m())));
}

TEST(Beta, IndependenceMixtureScales) {
  for (const Copula& c : {Copula::frank(3), Copula::fgm(0.7)}) {
    const double b = beta_coeff(c);
    for (double a : {0.25, 0.5, 0.75}) {
      EXPECT_NEAR(beta_coeff(Copula::mixture({a, 1 - a}, {c, Copula::pi()})), a * b, 1e-5) << c.name();
    }
  }
}

TEST(Mixing, SubadditiveInMixtures) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    const Copula a = Copula::frank(1.0 + 5.0 * d(rng));
    const Copula b = Copula::fgm(d(rng));
    const double w = d(rng);
    const Copula mix = Copula::mixture({w, 1 - w}, {a, b});
    EXPECT_LE(beta_coeff(mix, 256), w * beta_coeff(a, 256) + (1 - w) * beta_coeff(b, 256) + 1e-6);
    EXPECT_LE(psi_coeff(mix, 256), w * psi_coeff(a, 256) + (1 - w) * psi_coeff(b, 256) + 1e-6);
  }
}

TEST(Mixing, CoefficientOrdering) {
  for (const Copula& c : {Copula::frank(3), Copula::frank(-2), Copula::fgm(0.5), tilde(Copula::frank(5), 0.3)}) {
    EXPECT_TRUE(mixing_coefficients(c, 256).ordered()) << c.name();
  }
}

TEST(DecayTable, TildeFgmFirstRow) {
  const DecayTable t = decay_table(Copula::fgm(0.8), {PerturbationKind::TildePi, 0.5}, 4);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_NEAR(t.rows[0].beta, 0.05, 1e-4);
  for (const DecayRow& r : t.rows) EXPECT_NEAR(r.beta, r.predicted_beta, 1e-3);
  EXPECT_LE(t.fitted_rate, 0.5 + 0.02);
  EXPECT_GT(t.r_squared, 0.999);
}

TEST(DecayTable, HatRowsCarryTheAtom) {
  const DecayTable t = decay_table(Copula::frank(3), {PerturbationKind::HatM, 0.5}, 4);
  for (const DecayRow& r : t.rows) {
    EXPECT_GE(r.beta, std::pow(0.5, r.n) - 1e-12);
    EXPECT_LE(r.beta, r.predicted_beta + 1e-3);
    EXPECT_TRUE(std::isinf(r.psi));
  }
}

TEST(DecayTable, IndependenceWithoutPerturbation) {
  const DecayTable t = decay_table(Copula::pi(), {}, 3);
  for (const DecayRow& r : t.rows) {
    EXPECT_EQ(r.beta, 0.0);
    EXPECT_EQ(r.phi, 0.0);
    EXPECT_EQ(r.psi, 0.0);
  }
  EXPECT_TRUE(std::isnan(t.fitted_rate));
}

TEST(DecayTable, ComonotoneChainNeverMixes) {
  const DecayTable t = decay_table(Copula::frechet_m(), {}, 3);
  for (const DecayRow& r : t.rows) EXPECT_NEAR(r.beta, 1.0, 1e-12);
  EXPECT_NEAR(t.fitted_rate, 1.0, 1e-12);
}

TEST(DecayTable, GeometricErgodicityOfTilde) {
  for (const Copula& c : {Copula::frank(3), Copula::fgm(0.8), Copula::frank(-3)}) {
    for (double theta : {0.3, 0.6}) {
      const DecayTable t = decay_table(c, {PerturbationKind::TildePi, theta}, 4);
      EXPECT_LE(t.fitted_rate, 1 - theta + 0.02) << c.name();
      std::vector<double> phis;
      for (const DecayRow& r : t.rows) phis.push_back(r.phi);
      EXPECT_LE(geometric_rate_fit(phis).rate, 1 - theta + 0.02) << c.name();
    }
  }
}

TEST(DecayTable, HatOfIndependencePlateau) {
  const DecayTable t = decay_table(Copula::pi(), {PerturbationKind::HatM, 0.5}, 4);
  EXPECT_LE(t.rows[3].beta, t.rows[0].beta);
  for (const DecayRow& r : t.rows) EXPECT_LE(r.beta - std::pow(0.5, r.n), 0.01);
}

TEST(DecayTable, RejectsLongTables) {
  EXPECT_THROW(decay_table(Copula::pi(), {}, 9), DomainError);
}

TEST(RateFit, Examples) {
  const RateFit half = geometric_rate_fit({0.5, 0.25, 0.125});
  EXPECT_NEAR(half.rate, 0.5, 1e-14);
  EXPECT_NEAR(half.r_squared, 1.0, 1e-14);
  EXPECT_NEAR(geometric_rate_fit({1, 1, 1}).rate, 1.0, 1e-15);
  EXPECT_THROW(geometric_rate_fit({0.5, 0.0, 0.1}), NonPositive);
  EXPECT_THROW(geometric_rate_fit({0.5, 0.2}), DomainError);
}

TEST(DensityTable, AtomsAndFloor) {
  const DensityTable t = density_table(hat(Copula::fgm(0.5), 0.25), 64);
  EXPECT_TRUE(t.has_atoms());
  EXPECT_NEAR(t.main_atom.mean(), 0.25, 1e-15);
  EXPECT_EQ(beta_coeff(Copula::mixture({1e-12, 1 - 1e-12}, {Copula::fgm(0.5), Copula::pi()})), 0.0);
}
