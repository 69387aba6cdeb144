#pragma once

#include "copulab/copula.hpp"
#include "copulab/grid.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace copulab {

/// Seedable, splittable generator: std::mt19937_64 keyed through splitmix64, 53-bit uniforms.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64+splitmix64";

  explicit Rng(std::uint64_t seed);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Independent stream derived from this generator's seed and a stream index.
  Rng split(std::uint64_t stream) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct ChainSample {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string model_id;
};

/// X_0 ~ U(0,1) (or `start`), X_{k+1} = cond_quantile(C, X_k, U_k).
ChainSample sample_chain(const Copula& c, int len, std::uint64_t seed,
                         std::optional<double> start = std::nullopt);

/// Pairs (X_k, X_{k+lag}).
std::vector<UnitPoint> lagged_pairs(const ChainSample& chain, int lag);

/// Normalised histogram of the pairs on a bins x bins grid.
GridCopula empirical_grid(const std::vector<UnitPoint>& pairs, int bins);

struct EmpiricalBeta {
  double raw = 0.0;
  double noise_floor = 0.0;   // beta of the same-size i.i.d. uniform control histogram
  double calibrated = 0.0;    // raw - noise_floor
  int lag = 0;
  int bins = 0;
  std::size_t pairs = 0;
};

/// Histogram estimate of beta(C^lag) from a chain, calibrated against an i.i.d. control run
/// drawn from a stream split off the chain's seed.
EmpiricalBeta empirical_beta(const ChainSample& chain, int lag, int bins);

/// Spearman correlation of the ranks of (X_k, X_{k+lag}).
double lag_spearman(const ChainSample& chain, int lag);

/// Kolmogorov distance between the empirical CDF of `values` and U(0,1).
double ks_uniform_distance(std::vector<double> values);
/// 1.63 / sqrt(n).
double ks_band(std::size_t n);

/// Cells (rows: current state, columns: next state) whose transition density exceeds the
/// threshold.
struct ReachabilityMap {
  int resolution = 0;
  int steps = 1;
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> reachable;
  Matrix density;

  double fraction_reachable() const;
};

/// One-step map from cell masses of the model's CDF.
ReachabilityMap reachability_map(const Copula& c, int resolution, double threshold = 1e-6);
/// Two-step map from the self fold of the model's grid.
ReachabilityMap reachability_map_two_step(const Copula& c, int resolution, double threshold = 1e-6);

/// Agreement of a one-step map of the (X + Z, Y) copula (C = M, uniform margins) with its
/// zero-density predicates: rows x <= 1/2 reach y < sqrt(2x), rows x > 1/2 reach
/// y > 1 - sqrt(2(1-x)). A mismatch is tolerated within one cell of the predicate boundary
/// across the row.
struct RegionCheck {
  bool pass = true;
  int mismatches = 0;
  int tolerated = 0;
  int worst_row = -1;
  double worst_excess_cells = 0.0;
};

RegionCheck check_c5_regions(const ReachabilityMap& map);

}  // namespace copulab
