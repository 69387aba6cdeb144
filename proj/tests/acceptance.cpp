// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any fails.
//   copulab_acceptance [--cli PATH] [--only N]
#include "copulab/dependence.hpp"
#include "copulab/format.hpp"
#include "copulab/mixing.hpp"
#include "copulab/noise.hpp"
#include "copulab/perturbations.hpp"
#include "copulab/products.hpp"
#include "copulab/simulator.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace copulab;
using detail::num;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

std::string cli_path;

double grid_gap(const std::function<double(double, double)>& a, const std::function<double(double, double)>& b,
                int n) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) worst = std::max(worst, std::abs(a(double(i) / n, double(j) / n) - b(double(i) / n, double(j) / n)));
  return worst;
}

/// Random non-negative h, g with values in [0, 1]: a + b x^k.
std::vector<MDensitySpec> random_m_specs(int variant, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<MDensitySpec> out;
  for (int k = 0; k < count; ++k) {
    const double a1 = 0.5 * d(rng), b1 = 0.5 * d(rng), a2 = 0.5 * d(rng), b2 = 0.5 * d(rng);
    const int p1 = 1 + int(3 * d(rng)), p2 = 1 + int(3 * d(rng));
    MDensitySpec s;
    s.variant = variant;
    s.h = [=](double x) { return a1 + b1 * std::pow(x, p1); };
    s.g = [=](double x) { return a2 + b2 * std::pow(1 - x, p2); };
    s.h_label = num(a1, 3) + "+" + num(b1, 3) + "x^" + std::to_string(p1);
    s.g_label = num(a2, 3) + "+" + num(b2, 3) + "(1-x)^" + std::to_string(p2);
    out.push_back(s);
  }
  return out;
}

const Marginal U = Marginal::uniform();

// ---------------------------------------------------------------------------

Outcome validity_suite() {
  Outcome o;
  std::vector<Copula> models = {Copula::pi(),      Copula::frechet_m(), Copula::frechet_w(), Copula::frank(5),
                                Copula::frank(-3), Copula::fgm(0.5),    Copula::fgm(1.0)};
  const std::vector<Copula> builtins = models;
  for (int variant = 1; variant <= 4; ++variant)
    for (const MDensitySpec& s : random_m_specs(variant, 3, 100 + variant)) models.push_back(make_m_copula(s));
  for (const Copula& c : builtins) {
    for (double t : {0.25, 0.5, 1.0}) {
      models.push_back(tilde(c, t));
      models.push_back(hat(c, t));
      models.push_back(mesiar(c, t));
    }
    models.push_back(dolati(c));
  }
  models.push_back(c5_m_uniform_model());
  models.push_back(c6_indep_uniform_model());
  int failures = 0;
  for (const Copula& c : models) {
    const ValidationReport r = validate(c, 64, 1e-6);
    if (!r.pass) {
      ++failures;
      o.require(false, c.name() + " (" + r.worst_check + ")");
    }
  }
  o.note(std::to_string(models.size() - failures) + "/" + std::to_string(models.size()) + " models valid");
  return o;
}

Outcome m_density_margins() {
  Outcome o;
  double worst = 0.0;
  for (int variant = 1; variant <= 4; ++variant) {
    for (const MDensitySpec& s : random_m_specs(variant, 3, 200 + variant)) {
      const MarginReport r = density_unit_margins(m_density(s), 1e-6);
      worst = std::max(worst, r.max_deviation);
      o.require(r.pass, "m" + std::to_string(variant) + " " + r.worst_margin + " margin at " + num(r.worst_at));
    }
  }
  o.note("max margin deviation " + num(worst, 3));
  return o;
}

Outcome fold_algebra() {
  Outcome o;
  double id_gap = 0.0, pi_gap = 0.0;
  for (const Copula& c : {Copula::frank(3), Copula::fgm(0.7), Copula::frank(-2)}) {
    id_gap = std::max({id_gap, sup_distance(fold(Copula::frechet_m(), c).model(), c),
                       sup_distance(fold(c, Copula::frechet_m()).model(), c)});
    pi_gap = std::max({pi_gap, sup_distance(fold(Copula::pi(), c).model(), Copula::pi()),
                       sup_distance(fold(c, Copula::pi()).model(), Copula::pi())});
  }
  o.require(id_gap <= 1e-6, "M*C = C (" + num(id_gap, 3) + ")");
  o.require(pi_gap <= 1e-6, "Pi*C = Pi (" + num(pi_gap, 3) + ")");
  double fgm_gap = 0.0;
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{0.9, 0.9}, {0.5, 1.0}, {0.3, 0.8}}) {
    const Copula g = fold(Copula::fgm(a), Copula::fgm(b)).model();
    // Oracle: direct quadrature of the kernel integral at interior points.
    const auto oracle_fold = [a = a, b = b](double x, double y) {
      return oracle::fold_point([a](double u, double t) { return oracle::fgm_dv(a, u, t); },
                                [b](double t, double v) { return oracle::fgm_du(b, t, v); }, x, y);
    };
    for (int i = 1; i <= 7; ++i)
      for (int j = 1; j <= 7; ++j) {
        const double x = i / 8.0, y = j / 8.0;
        fgm_gap = std::max({fgm_gap, std::abs(cdf(g, x, y) - oracle_fold(x, y)),
                            std::abs(cdf(g, x, y) - oracle::fgm_cdf(a * b / 3, x, y))});
      }
  }
  o.require(fgm_gap <= 1e-5, "FGM(a)*FGM(b) = FGM(ab/3) (" + num(fgm_gap, 3) + ")");
  o.note("M " + num(id_gap, 3) + ", Pi " + num(pi_gap, 3) + ", FGM " + num(fgm_gap, 3));
  return o;
}

Outcome binomial_powers() {
  Outcome o;
  struct Pair {
    Copula a, b;
  };
  const std::vector<Pair> pairs = {{Copula::pi(), Copula::frank(3)}, {Copula::frechet_m(), Copula::fgm(0.5)}};
  double worst = 0.0;
  for (const Pair& p : pairs) {
    for (int n : {2, 3}) {
      const double theta = 0.3;
      const Copula mix = Copula::mixture({theta, 1 - theta}, {p.a, p.b});
      const double gap = sup_distance(Copula::grid(binomial_mixture_power(p.a, p.b, theta, n)), n_fold(mix, n).model());
      worst = std::max(worst, gap);
      o.require(gap <= 1e-4, "mixture power " + p.a.name() + "," + p.b.name() + " n=" + std::to_string(n));
    }
  }
  for (const Copula& c : {Copula::frank(3), Copula::fgm(0.7)}) {
    for (int n : {2, 3}) {
      const double theta = 0.4;
      const double gt = sup_distance(joint_tilde(c, theta, n), n_fold(tilde(c, theta), n).model());
      const double gh = sup_distance(joint_hat(c, theta, n), n_fold(hat(c, theta), n).model());
      worst = std::max({worst, gt, gh});
      o.require(gt <= 1e-4, "joint_tilde " + c.name() + " n=" + std::to_string(n));
      o.require(gh <= 1e-4, "joint_hat " + c.name() + " n=" + std::to_string(n));
    }
  }
  o.note("max sup distance " + num(worst, 3));
  return o;
}

Outcome binomial_limit() {
  Outcome o;
  std::vector<double> a(60);
  const double limit = 0.4;
  for (int i = 1; i <= 60; ++i) a[i - 1] = limit + std::ldexp(1.0, -i);
  const double d60 = std::abs(binomial_average(a, 0.3, 60) - limit);
  o.require(d60 <= 1e-3, "n=60 within 1e-3 (" + num(d60, 3) + ")");
  double prev = INFINITY;
  for (int n : {20, 40, 60}) {
    const double d = std::abs(binomial_average(a, 0.3, n) - limit);
    o.require(d <= prev, "monotone tail at n=" + std::to_string(n));
    prev = d;
    o.note("n=" + std::to_string(n) + " gap " + num(d, 3));
  }
  return o;
}

Outcome identity_suite() {
  Outcome o;
  MDensitySpec s;
  s.h = [](double x) { return x; };
  s.g = [](double x) { return x; };
  const Copula m1 = make_m_copula(s);
  double worst = 0.0;
  for (const Copula& c : {Copula::frank(3), Copula::fgm(0.7), m1}) {
    for (double theta : {0.25, 0.5, 0.75}) {
      const IdentityReport r = perturbation_identities(c, theta);
      worst = std::max(worst, r.max_discrepancy);
      o.require(r.checks.size() == 10, "ten identities");
      for (const IdentityCheck& k : r.checks)
        o.require(k.discrepancy <= 2e-3, c.name() + " theta=" + num(theta) + " " + k.name + " (" + num(k.discrepancy, 3) + ")");
    }
  }
  o.note("max discrepancy " + num(worst, 3));
  return o;
}

Outcome m_tails() {
  Outcome o;
  double worst = 0.0;
  for (int variant = 1; variant <= 4; ++variant) {
    for (const MDensitySpec& s : random_m_specs(variant, 2, 300 + variant)) {
      const Copula c = make_m_copula(s);
      const double l = tail_lower(c), u = tail_upper(c);
      worst = std::max({worst, l, u});
      o.require(l <= 0.02 && u <= 0.02, c.name() + " tails " + num(l, 3) + "," + num(u, 3));
    }
  }
  const double control = tail_lower(Copula::frechet_m());
  o.require(control >= 0.98, "control lambda_L(M) >= 0.98 (" + num(control, 3) + ")");
  o.note("max m-tail " + num(worst, 3) + ", lambda_L(M) " + num(control, 3));
  return o;
}

Outcome noise_oracles() {
  Outcome o;
  const Copula c5q = c5_general(Copula::frechet_m(), U, U, U);
  const Copula c6q = c6_general(Copula::pi(), U, U, U);
  const Copula c7m = c7_general(Copula::frechet_m(), U, U, U, U);
  const Copula c7p = c7_general(Copula::pi(), U, U, U, U);
  const auto closed5 = [](double u, double v) { return c5_closed_M_uniform({u, v}); };
  const auto closed6 = [](double u, double v) { return c6_closed_indep_uniform({u, v}); };
  const double g5 = grid_gap([&](double u, double v) { return cdf(c5q, u, v); }, closed5, 32);
  const double g6 = grid_gap([&](double u, double v) { return cdf(c6q, u, v); }, closed6, 32);
  const double g7m = grid_gap([&](double u, double v) { return cdf(c7m, u, v); }, closed6, 32);
  const double g7p = grid_gap([&](double u, double v) { return cdf(c7p, u, v); }, [](double u, double v) { return u * v; }, 32);
  o.require(g5 <= 1e-5, "C5 closed vs quadrature (" + num(g5, 3) + ")");
  o.require(g6 <= 1e-4, "C6 closed vs quadrature (" + num(g6, 3) + ")");
  o.require(g7m <= 1e-4, "C7(M) = C6 (" + num(g7m, 3) + ")");
  o.require(g7p <= 1e-4, "C7(Pi) = Pi (" + num(g7p, 3) + ")");
  const C6DiscrepancyReport r = c6_table_discrepancy(33, 1e-4);
  std::string regions(r.regions_disagreeing.begin(), r.regions_disagreeing.end());
  o.require(r.max_closed_error <= 1e-4, "C6 discrepancy report closed form");
  o.note("C5 " + num(g5, 3) + ", C6 " + num(g6, 3) + ", C7(M) " + num(g7m, 3) + ", C7(Pi) " + num(g7p, 3));
  o.note("eight-region (u,v) table: regions {" + regions + "} off by up to " + num(r.max_table_error, 3) +
         " vs closed form " + num(r.max_closed_error, 3));
  return o;
}

Outcome mixing_targets() {
  Outcome o;
  const MixingReport f = mixing_coefficients(Copula::fgm(0.8));
  o.require(std::abs(f.beta - 0.1) <= 1e-3, "beta(FGM 0.8) = 0.1 (" + num(f.beta) + ")");
  o.require(std::abs(f.phi - 0.2) <= 2e-3, "phi(FGM 0.8) = 0.2 (" + num(f.phi) + ")");
  o.require(std::abs(f.psi - 0.8) <= 2e-3, "psi(FGM 0.8) = 0.8 (" + num(f.psi) + ")");
  const double bm = beta_coeff(Copula::frechet_m());
  o.require(std::abs(bm - 1.0) <= 1e-12, "beta(M) = 1 (" + num(bm) + ")");
  for (const Copula& c : {hat(Copula::frank(3), 0.1), hat(Copula::pi(), 0.5),
                          Copula::mixture({0.2, 0.8}, {Copula::frechet_m(), Copula::fgm(0.3)})}) {
    o.require(std::isinf(psi_coeff(c)), "psi = inf for " + c.name());
  }
  o.note("FGM(0.8): beta " + num(f.beta, 6) + " phi " + num(f.phi, 6) + " psi " + num(f.psi, 6) + "; beta(M) " + num(bm));
  return o;
}

Outcome independence_mixture() {
  Outcome o;
  double worst = 0.0;
  for (const Copula& c : {Copula::frank(3), Copula::fgm(0.7)}) {
    const double b = beta_coeff(c);
    for (double a : {0.25, 0.5, 0.75}) {
      const double gap = std::abs(beta_coeff(Copula::mixture({a, 1 - a}, {c, Copula::pi()})) - a * b);
      worst = std::max(worst, gap);
      o.require(gap <= 1e-5, c.name() + " a=" + num(a));
    }
  }
  o.note("max gap " + num(worst, 3));
  return o;
}

Outcome geometric_decay() {
  Outcome o;
  for (const Copula& c : {Copula::frank(3), Copula::fgm(0.8)}) {
    const DecayTable t = decay_table(c, {PerturbationKind::TildePi, 0.5}, 4, 128);
    // Target from the powers of C; rows checked both from the table and from direct folds
    // of the perturbed copula.
    const std::vector<Copula> powers = fold_powers(c, 4, 128);
    std::vector<double> phis;
    double worst = 0.0;
    for (const DecayRow& r : t.rows) {
      const double target = std::pow(0.5, r.n) * beta_coeff(powers[r.n - 1]);
      const double direct = beta_coeff(n_fold(tilde(c, 0.5), r.n, 128).model());
      const double gap = std::max(std::abs(r.beta - target), std::abs(direct - target));
      worst = std::max(worst, gap);
      o.require(gap <= 1e-3, c.name() + " row n=" + std::to_string(r.n) + " (" + num(gap, 3) + ")");
      phis.push_back(r.phi);
    }
    const RateFit phi_fit = geometric_rate_fit(phis);
    o.require(t.fitted_rate <= 0.52, c.name() + " beta rate <= 0.52 (" + num(t.fitted_rate, 4) + ")");
    o.require(phi_fit.r_squared > 0.999, c.name() + " phi R^2 > 0.999 (" + num(phi_fit.r_squared, 6) + ")");
    o.note(c.name() + ": row gap " + num(worst, 3) + ", rate " + num(t.fitted_rate, 4) + ", phi R^2 " +
           num(phi_fit.r_squared, 6));
  }
  return o;
}

Outcome hat_plateau() {
  Outcome o;
  const DecayTable t = decay_table(Copula::pi(), {PerturbationKind::HatM, 0.5}, 4);
  double worst = -INFINITY;
  for (const DecayRow& r : t.rows) {
    const double excess = r.beta - std::pow(0.5, r.n);
    worst = std::max(worst, excess);
    o.require(excess <= 0.01, "n=" + std::to_string(r.n) + " excess " + num(excess, 3));
  }
  o.note("max beta_n - 0.5^n " + num(worst, 3));
  return o;
}

Outcome simulation_checks() {
  Outcome o;
  const double rho = lag_spearman(sample_chain(Copula::fgm(1.0), 100000, 20240601), 1);
  o.require(std::abs(rho - 1.0 / 3.0) <= 0.015, "FGM(1) lag-1 Spearman (" + num(rho, 5) + ")");
  const EmpiricalBeta tb = empirical_beta(sample_chain(tilde(Copula::fgm(0.8), 0.5), 1000000, 20240602), 1, 16);
  o.require(std::abs(tb.calibrated - 0.05) <= 0.03, "tilde beta-hat within 0.03 of 0.05 (" + num(tb.calibrated, 4) + ")");
  const EmpiricalBeta mb = empirical_beta(sample_chain(Copula::frechet_m(), 100000, 20240603), 3, 16);
  o.require(mb.raw >= 0.9, "M-chain beta-hat at lag 3 (" + num(mb.raw, 4) + ")");
  o.note("rho " + num(rho, 5) + ", tilde beta-hat " + num(tb.calibrated, 4) + " (raw " + num(tb.raw, 4) + ", floor " +
         num(tb.noise_floor, 4) + "), M lag-3 " + num(mb.raw, 4));
  return o;
}

Outcome reachability() {
  Outcome o;
  const RegionCheck rc = check_c5_regions(reachability_map(c5_m_uniform_model(), 128));
  o.require(rc.pass, "C5 regions (" + std::to_string(rc.mismatches) + " mismatches, worst row " +
                         std::to_string(rc.worst_row) + ")");
  const ReachabilityMap two = reachability_map_two_step(c6_indep_uniform_model(), 128);
  o.require(two.fraction_reachable() == 1.0, "C6 two-step fully reachable (" + num(two.fraction_reachable()) + ")");
  o.note("C5 mismatches " + std::to_string(rc.mismatches) + " (all within tolerance: " +
         std::to_string(rc.tolerated) + "), C6 two-step " + num(100 * two.fraction_reachable()) + "% reachable");
  return o;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  // In-process: chain and grid CSV text from two independent runs.
  const auto chain_csv = [] {
    std::ostringstream out;
    for (double x : sample_chain(tilde(Copula::frank(3), 0.3), 5000, 7).values) out << num(x, 17) << "\n";
    write_grid_csv(out, fold(Copula::fgm(0.5), Copula::frank(2), 32).grid);
    return out.str();
  };
  o.require(chain_csv() == chain_csv(), "in-process CSV identical");
  if (cli_path.empty()) {
    o.note("CLI not given, in-process check only");
    return o;
  }
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "copulab_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"simulate", "simulate --copula '{\"type\":\"fgm\",\"theta\":0.8}' --perturb tilde:0.5 --len 20000 --seed 99"},
      {"mixing", "mixing --copula '{\"type\":\"frank\",\"lambda\":3}' --perturb tilde:0.5 --n-max 3 --grid 64"},
      {"regions", "regions --noise c5-m-uniform --resolution 64 --steps 1"},
  };
  for (const auto& [tag, args] : runs) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const std::filesystem::path out = dir / (tag + std::to_string(rep) + ".csv");
      const std::string cmd = "\"" + cli_path + "\" " + args + " --out \"" + out.string() + "\" 2>/dev/null";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, tag + " exit status");
      const std::string text = read_file(out);
      o.require(!text.empty(), tag + " output written");
      if (rep == 0) first = text;
      else o.require(first == text, tag + " byte-identical");
    }
  }
  std::filesystem::remove_all(dir);
  o.note("CLI simulate/mixing/regions byte-identical across runs");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int k = 1; k + 1 < argc; k += 2) {
    const std::string flag = argv[k];
    if (flag == "--cli") cli_path = argv[k + 1];
    else if (flag == "--only") only = std::atoi(argv[k + 1]);
  }
  const std::vector<Criterion> criteria = {
      {1, "copula validity", 30, validity_suite},
      {2, "m-density margins", 5, m_density_margins},
      {3, "fold algebra", 0, fold_algebra},
      {4, "mixture powers and joint perturbations", 0, binomial_powers},
      {5, "binomial average limit", 0, binomial_limit},
      {6, "perturbation identities", 0, identity_suite},
      {7, "m-copula tails", 0, m_tails},
      {8, "noise copula oracles", 0, noise_oracles},
      {9, "mixing coefficient targets", 0, mixing_targets},
      {10, "independence mixture scaling", 0, independence_mixture},
      {11, "geometric decay of tilde", 120, geometric_decay},
      {12, "hat plateau", 0, hat_plateau},
      {13, "simulation cross-checks", 0, simulation_checks},
      {14, "reachability", 0, reachability},
      {15, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0) o.require(secs < c.time_limit_s, "runtime < " + num(c.time_limit_s) + " s");
    if (!o.pass) ++failed;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << " [" << num(secs, 3)
              << " s]: " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
