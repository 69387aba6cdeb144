#include "copulab/io.hpp"
#include "copulab/perturbations.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace copulab;

namespace {

std::string error_of(const std::string& spec) {
  try {
    parse_copula_spec(spec);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(CopulaSpec, Basic) {
  EXPECT_LE(sup_distance(parse_copula_spec(R"({"type":"pi"})"), Copula::pi()), 0.0);
  EXPECT_LE(sup_distance(parse_copula_spec(R"({"type":"m"})"), Copula::frechet_m()), 0.0);
  EXPECT_LE(sup_distance(parse_copula_spec(R"({"type":"frechet-w"})"), Copula::frechet_w()), 0.0);
  EXPECT_LE(sup_distance(parse_copula_spec(R"({"type":"frank","lambda":2.5})"), Copula::frank(2.5)), 0.0);
  EXPECT_LE(sup_distance(parse_copula_spec(R"({"type":"fgm","theta":0.4})"), Copula::fgm(0.4)), 0.0);
}

TEST(CopulaSpec, MixtureAndFile) {
  const std::string text =
      R"({"type":"mixture","weights":[0.3,0.7],"components":[{"type":"pi"},{"type":"fgm","theta":0.5}]})";
  const Copula expected = Copula::mixture({0.3, 0.7}, {Copula::pi(), Copula::fgm(0.5)});
  EXPECT_LE(sup_distance(parse_copula_spec(text), expected), 1e-15);

  const std::string path = testing::TempDir() + "copulab_spec.json";
  std::ofstream(path) << text;
  EXPECT_LE(sup_distance(parse_copula_spec(path), expected), 1e-15);
  std::remove(path.c_str());
}

TEST(CopulaSpec, MDensity) {
  const Copula c = parse_copula_spec(R"({"type":"m-density","variant":1,"h":"poly:[0,1]","g":"poly:[0,1]"})");
  EXPECT_TRUE(validate(c, 32, 1e-6).pass);
}

TEST(CopulaSpec, ErrorsNameTheField) {
  EXPECT_NE(error_of(R"({"type":"fgm"})").find("theta"), std::string::npos);
  EXPECT_NE(error_of(R"({"type":"fgm","theta":3})").find("theta"), std::string::npos);
  EXPECT_NE(error_of(R"({"type":"frank","lambda":0})").find("lambda"), std::string::npos);
  EXPECT_NE(error_of(R"({"type":"mixture","weights":[1],"components":[{"type":"fgm","theta":-2}]})")
                .find("components[0].theta"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"type":"banana"})").find("type"), std::string::npos);
  EXPECT_FALSE(error_of("{not json").empty());
  EXPECT_FALSE(error_of("/no/such/file.json").empty());
}

TEST(Polynomial, HornerAndErrors) {
  const Function1 p = parse_polynomial("poly:[1,-2,3]", "h");
  EXPECT_DOUBLE_EQ(p(0.5), 1 - 1 + 0.75);
  EXPECT_THROW(parse_polynomial("poly:1,2", "h"), SpecError);
  EXPECT_THROW(parse_polynomial("x^2", "h"), SpecError);
}

TEST(NoiseSpec, IdsAndMarginals) {
  const Copula c5 = parse_noise_spec("c5-m-uniform", Copula::frechet_m(), {});
  EXPECT_NEAR(cdf(c5, 0.18, 0.5), 0.175, 1e-5);
  const Copula g = parse_noise_spec("c6", Copula::pi(), {"uniform:0,1", "uniform:0,1", "uniform:0,1"});
  EXPECT_NEAR(cdf(g, 0.125, 0.5), c6_closed_indep_uniform({0.125, 0.5}), 1e-4);
  EXPECT_THROW(parse_noise_spec("c7", Copula::pi(), {"uniform:0,1"}), SpecError);
  EXPECT_THROW(parse_noise_spec("c9", Copula::pi(), {}), SpecError);
}
