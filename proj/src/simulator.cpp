#include "copulab/simulator.hpp"

#include "copulab/mixing.hpp"
#include "copulab/products.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace copulab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double Rng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

ChainSample sample_chain(const Copula& c, int len, std::uint64_t seed, std::optional<double> start) {
  if (len < 2) throw DomainError("sample_chain needs len >= 2");
  if (start && !(*start >= 0.0 && *start <= 1.0)) throw DomainError("start must lie in [0,1]");
  Rng rng(seed);
  ChainSample out;
  out.seed = seed;
  out.model_id = c.name();
  out.values.reserve(len);
  double x = start ? *start : rng.uniform();
  out.values.push_back(x);
  for (int k = 1; k < len; ++k) {
    x = cond_quantile(c, x, rng.uniform());
    out.values.push_back(x);
  }
  return out;
}

std::vector<UnitPoint> lagged_pairs(const ChainSample& chain, int lag) {
  if (lag < 1 || lag >= static_cast<int>(chain.values.size())) {
    throw DomainError("lag must lie in [1, len)");
  }
  std::vector<UnitPoint> out;
  out.reserve(chain.values.size() - lag);
  for (std::size_t k = 0; k + lag < chain.values.size(); ++k) {
    out.emplace_back(chain.values[k], chain.values[k + lag]);
  }
  return out;
}

GridCopula empirical_grid(const std::vector<UnitPoint>& pairs, int bins) {
  if (bins < 1) throw DomainError("empirical_grid needs bins >= 1");
  if (pairs.empty()) throw DomainError("empirical_grid needs at least one pair");
  Matrix mass = Matrix::Zero(bins, bins);
  const auto index = [bins](double x) { return std::clamp(int(std::floor(x * bins)), 0, bins - 1); };
  for (const UnitPoint& p : pairs) mass(index(p.u), index(p.v)) += 1.0;
  mass /= double(pairs.size());
  return GridCopula::from_cell_mass(mass, 0.0);
}

EmpiricalBeta empirical_beta(const ChainSample& chain, int lag, int bins) {
  const std::vector<UnitPoint> pairs = lagged_pairs(chain, lag);
  EmpiricalBeta r;
  r.lag = lag;
  r.bins = bins;
  r.pairs = pairs.size();
  r.raw = beta_coeff(Copula::grid(empirical_grid(pairs, bins)), bins);

  Rng control = Rng(chain.seed).split(0xc0117201);
  std::vector<UnitPoint> iid;
  iid.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double u = control.uniform();
    iid.emplace_back(u, control.uniform());
  }
  r.noise_floor = beta_coeff(Copula::grid(empirical_grid(iid, bins)), bins);
  r.calibrated = r.raw - r.noise_floor;
  return r;
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  std::size_t k = 0;
  while (k < idx.size()) {
    std::size_t e = k;
    while (e + 1 < idx.size() && x[idx[e + 1]] == x[idx[k]]) ++e;
    const double avg = 0.5 * double(k + e) + 1.0;
    for (std::size_t t = k; t <= e; ++t) r[idx[t]] = avg;
    k = e + 1;
  }
  return r;
}

}  // namespace

double lag_spearman(const ChainSample& chain, int lag) {
  const std::size_t m = chain.values.size();
  if (lag < 1 || static_cast<std::size_t>(lag) + 2 > m) throw DomainError("lag too large");
  const std::vector<double> a(chain.values.begin(), chain.values.end() - lag);
  const std::vector<double> b(chain.values.begin() + lag, chain.values.end());
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = double(ra.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < ra.size(); ++k) {
    sab += (ra[k] - ma) * (rb[k] - mb);
    saa += (ra[k] - ma) * (ra[k] - ma);
    sbb += (rb[k] - mb) * (rb[k] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double ks_uniform_distance(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double n = double(values.size());
  double d = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = clamp01(values[k]);
    d = std::max({d, (k + 1) / n - x, x - k / n});
  }
  return d;
}

double ks_band(std::size_t n) { return 1.63 / std::sqrt(double(n)); }

double ReachabilityMap::fraction_reachable() const {
  if (resolution == 0) return 0.0;
  return double(reachable.sum()) / (double(resolution) * resolution);
}

namespace {

ReachabilityMap map_from_grid(const GridCopula& g, int steps, double threshold) {
  ReachabilityMap m;
  m.resolution = g.n();
  m.steps = steps;
  const double area = g.h() * g.h();
  m.density = g.cell_mass() / area;
  if (g.singular_m_mass() > 0.0) {
    for (int i = 0; i < g.n(); ++i) m.density(i, i) += g.singular_m_mass() / area * g.h();
  }
  m.reachable = (m.density.array() > threshold).cast<int>();
  return m;
}

}  // namespace

ReachabilityMap reachability_map(const Copula& c, int resolution, double threshold) {
  if (resolution < 2) throw DomainError("reachability map needs resolution >= 2");
  return map_from_grid(to_grid(c, resolution), 1, threshold);
}

ReachabilityMap reachability_map_two_step(const Copula& c, int resolution, double threshold) {
  if (resolution < kMinFoldGrid) throw ResolutionTooLow("two-step map needs resolution >= 16");
  const Copula g = Copula::grid(to_grid(c, resolution), c.name());
  return map_from_grid(fold(g, g, resolution).grid, 2, threshold);
}

RegionCheck check_c5_regions(const ReachabilityMap& map) {
  RegionCheck r;
  const int n = map.resolution;
  const double h = 1.0 / n;
  const auto boundary = [](double x) {
    return x <= 0.5 ? std::sqrt(2.0 * x) : 1.0 - std::sqrt(2.0 * (1.0 - x));
  };
  for (int i = 0; i < n; ++i) {
    const double x0 = i * h, x1 = (i + 1) * h, xc = (i + 0.5) * h;
    // The row straddling x = 1/2 reaches everything but a sliver on both sides.
    const bool straddle = x0 < 0.5 && x1 > 0.5;
    const double b0 = boundary(straddle ? xc : x0);
    const double b1 = boundary(straddle ? xc : x1);
    const double lo = std::min(b0, b1) - h;
    const double hi = std::max(b0, b1) + h;
    const double bc = boundary(xc);
    for (int j = 0; j < n; ++j) {
      const double yc = (j + 0.5) * h;
      const bool predicted = straddle ? true : (xc <= 0.5 ? yc < bc : yc > bc);
      const bool observed = map.reachable(i, j) != 0;
      if (predicted == observed) continue;
      ++r.mismatches;
      if (straddle || (yc >= lo && yc <= hi)) {
        ++r.tolerated;
        continue;
      }
      const double excess = std::min(std::abs(yc - lo), std::abs(yc - hi)) / h;
      r.pass = false;
      if (excess > r.worst_excess_cells) {
        r.worst_excess_cells = excess;
        r.worst_row = i;
      }
    }
  }
  return r;
}

}  // namespace copulab
