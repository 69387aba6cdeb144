// copulab: batch CSV front end for the copula library.

#include "copulab/copula.hpp"
#include "copulab/dependence.hpp"
#include "copulab/format.hpp"
#include "copulab/io.hpp"
#include "copulab/mixing.hpp"
#include "copulab/noise.hpp"
#include "copulab/perturbations.hpp"
#include "copulab/products.hpp"
#include "copulab/simulator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace copulab;
using detail::num;

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kMalformed = 1, kInvalid = 2, kNonConvergence = 3 };

struct Options {
  std::string command;
  std::string copula;
  std::string perturb;
  std::string noise;
  std::string marginals;
  int grid = 0;
  int n_max = 4;
  std::uint64_t seed = 1;
  std::string out;
  int resolution = 128;
  int steps = 1;
  int len = 10000;
  std::optional<double> start;
  int points = 9;
};

/// Raised for a failed check whose outcome has already been written.
struct ValidationFailed {};
struct NonConvergence {};

std::string header(const Options& o, const std::string& extra) {
  std::string h = "# copulab " + std::string(kVersion) + " command=" + o.command;
  if (!extra.empty()) h += " " + extra;
  return h + "\n";
}

std::vector<std::string> split_commas(const std::string& s) {
  // Marginal specs carry their own commas (uniform:0,1), so split before each "name:".
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.find(':') != std::string::npos && !cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
    cur += cur.empty() ? tok : "," + tok;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Copula base_copula(const Options& o) {
  if (o.copula.empty()) throw SpecError("missing field 'copula'");
  return parse_copula_spec(o.copula);
}

Copula model(const Options& o) {
  Copula c = base_copula(o);
  if (!o.perturb.empty()) c = apply(c, parse_perturbation(o.perturb));
  return c;
}

Copula noise_model(const Options& o) {
  const Copula base = o.copula.empty() ? Copula::pi() : base_copula(o);
  return parse_noise_spec(o.noise, base, split_commas(o.marginals));
}

void summary(const std::string& check, bool pass, const std::string& detail) {
  std::fprintf(stderr, "%s: %s %s\n", check.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
}

void cmd_validate(const Options& o, std::ostream& out) {
  const Copula c = model(o);
  const int n = o.grid > 0 ? o.grid : 64;
  const ValidationReport r = validate(c, n, 1e-6);
  out << header(o, "grid=" + std::to_string(n) + " tol=1e-6");
  out << "model,pass,ground_error,margin_error,min_volume,worst_check,worst_u,worst_v\n";
  out << c.name() << "," << (r.pass ? 1 : 0) << "," << num(r.ground_error) << ","
      << num(r.margin_error) << "," << num(r.min_volume) << ","
      << (r.worst_check.empty() ? "none" : r.worst_check) << "," << num(r.worst_u) << ","
      << num(r.worst_v) << "\n";
  summary("validate " + c.name(), r.pass,
          "ground=" + num(r.ground_error, 3) + " margin=" + num(r.margin_error, 3) +
              " min_volume=" + num(r.min_volume, 3));
  if (!r.pass) throw ValidationFailed{};
}

void cmd_coeffs(const Options& o, std::ostream& out) {
  const Copula c = model(o);
  const std::vector<CoefficientReport> reports = all_coefficients(c);
  out << header(o, "model=" + c.name());
  out << "coefficient,value,method,grid,tol,converged\n";
  bool converged = true;
  for (const CoefficientReport& r : reports) {
    out << to_string(r.name) << "," << num(r.value) << "," << to_string(r.method) << "," << r.grid
        << "," << num(r.tol) << "," << (r.converged ? 1 : 0) << "\n";
    summary(to_string(r.name), r.in_range() && r.converged, "value=" + num(r.value, 6));
    converged = converged && r.converged;
  }
  if (!converged) throw NonConvergence{};
}

void cmd_mixing(const Options& o, std::ostream& out) {
  const Copula c = base_copula(o);
  const PerturbationParams p =
      o.perturb.empty() ? PerturbationParams{} : parse_perturbation(o.perturb);
  const int fold_grid = o.grid > 0 ? o.grid : kDefaultChainGrid;
  const DecayTable t = decay_table(c, p, o.n_max, fold_grid, kDefaultMixingGrid);
  out << header(o, "model=" + c.name() + " perturb=" + to_string(p) + " grid=" +
                       std::to_string(fold_grid) + " mixing_grid=" +
                       std::to_string(t.mixing_grid) + " floor=" + num(kMixingFloor));
  out << "# fitted_rate=" << num(t.fitted_rate) << " r_squared=" << num(t.r_squared) << "\n";
  out << "n,beta,phi,psi,predicted_beta\n";
  for (const DecayRow& r : t.rows) {
    out << r.n << "," << num(r.beta) << "," << num(r.phi) << "," << num(r.psi) << ","
        << num(r.predicted_beta) << "\n";
  }
  summary("mixing " + c.name(), true, "fitted_rate=" + num(t.fitted_rate, 6));
}

void write_cdf_grid(const Copula& c, int points, std::ostream& out) {
  out << "u,v,cdf\n";
  for (int i = 0; i < points; ++i) {
    const double u = (i + 1.0) / (points + 1.0);
    for (int j = 0; j < points; ++j) {
      const double v = (j + 1.0) / (points + 1.0);
      out << num(u) << "," << num(v) << "," << num(cdf(c, u, v)) << "\n";
    }
  }
}

void cmd_perturb_eval(const Options& o, std::ostream& out) {
  if (o.perturb.empty()) throw SpecError("missing field 'perturb'");
  const Copula c = model(o);
  const ValidationReport r = validate(c, 64, 1e-6);
  out << header(o, "model=" + c.name() + " points=" + std::to_string(o.points) +
                       " validate_grid=64 tol=1e-6");
  write_cdf_grid(c, o.points, out);
  summary("validate " + c.name(), r.pass, "worst=" + (r.worst_check.empty() ? "none" : r.worst_check));
  if (!r.pass) throw ValidationFailed{};
}

void cmd_noise_eval(const Options& o, std::ostream& out) {
  if (o.noise.empty()) throw SpecError("missing field 'noise'");
  const Copula c = noise_model(o);
  out << header(o, "model=" + c.name() + " points=" + std::to_string(o.points) + " tol=1e-10");
  write_cdf_grid(c, o.points, out);
  if (o.noise == "c6-indep-uniform") {
    const C6DiscrepancyReport d = c6_table_discrepancy(o.points, 1e-4);
    std::string regions(d.regions_disagreeing.begin(), d.regions_disagreeing.end());
    out << "# printed_table_regions_disagreeing=" << (regions.empty() ? "none" : regions)
        << " max_table_error=" << num(d.max_table_error)
        << " max_closed_error=" << num(d.max_closed_error) << "\n";
  }
  summary("noise " + c.name(), true, "");
}

void cmd_simulate(const Options& o, std::ostream& out) {
  const Copula c = model(o);
  const ChainSample s = sample_chain(c, o.len, o.seed, o.start);
  out << "# copulab " << kVersion << " command=simulate\n";
  out << "# seed=" << s.seed << "\n# model=" << s.model_id << "\n# generator=" << Rng::kName
      << "\n# len=" << o.len << "\n";
  out << "x\n";
  for (double x : s.values) out << num(x, 17) << "\n";
  const double ks = ks_uniform_distance(s.values);
  summary("ks-uniform", o.start.has_value() || ks <= ks_band(s.values.size()),
          "distance=" + num(ks, 4) + " band=" + num(ks_band(s.values.size()), 4));
}

void cmd_regions(const Options& o, std::ostream& out) {
  const Copula c = o.noise.empty() ? model(o) : noise_model(o);
  if (o.steps != 1 && o.steps != 2) throw SpecError("field 'steps' must be 1 or 2");
  const ReachabilityMap m = o.steps == 1 ? reachability_map(c, o.resolution)
                                         : reachability_map_two_step(c, o.resolution);
  out << header(o, "model=" + c.name() + " resolution=" + std::to_string(o.resolution) +
                       " steps=" + std::to_string(o.steps) + " threshold=1e-6");
  out << "# rows: current state x (first row x near 0), columns: next state y\n";
  for (int i = 0; i < m.resolution; ++i) {
    for (int j = 0; j < m.resolution; ++j) out << (j ? "," : "") << m.reachable(i, j);
    out << "\n";
  }
  summary("regions " + c.name(), true, "reachable_fraction=" + num(m.fraction_reachable(), 6));
  if (o.noise == "c5-m-uniform" && o.steps == 1) {
    const RegionCheck rc = check_c5_regions(m);
    summary("c5-predicates", rc.pass, "mismatches=" + std::to_string(rc.mismatches) +
                                          " tolerated=" + std::to_string(rc.tolerated));
    if (!rc.pass) throw ValidationFailed{};
  }
}

int run(const Options& o) {
  std::ostringstream out;
  int status = kOk;
  try {
    if (o.grid != 0 && (o.grid < 16 || o.grid > 1024)) throw SpecError("field 'grid' must lie in [16, 1024]");
    if (o.command == "validate") cmd_validate(o, out);
    else if (o.command == "coeffs") cmd_coeffs(o, out);
    else if (o.command == "mixing") cmd_mixing(o, out);
    else if (o.command == "perturb-eval") cmd_perturb_eval(o, out);
    else if (o.command == "noise-eval") cmd_noise_eval(o, out);
    else if (o.command == "simulate") cmd_simulate(o, out);
    else if (o.command == "regions") cmd_regions(o, out);
  } catch (const ValidationFailed&) {
    status = kInvalid;
  } catch (const NonConvergence&) {
    status = kNonConvergence;
  } catch (const SpecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kMalformed;
  } catch (const ResolutionTooLow& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kMalformed;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kMalformed;
  } catch (const MarginalMismatch& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNonConvergence;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  }
  if (o.out.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "error: cannot write %s\n", o.out.c_str());
      return kMalformed;
    }
    f << out.str();
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Copula-based Markov chain toolkit"};
  app.require_subcommand(1, 1);
  Options o;

  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--copula", o.copula, "JSON copula spec or path to a JSON file");
    sub->add_option("--perturb", o.perturb, "tilde:θ, hat:θ, mesiar:θ or dolati");
    sub->add_option("--grid", o.grid, "grid resolution in [16, 1024]");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output CSV path (stdout when absent)");
  };
  const auto noise = [&o](CLI::App* sub) {
    sub->add_option("--noise", o.noise, "c5-m-uniform, c6-indep-uniform, c5, c6 or c7");
    sub->add_option("--marginals", o.marginals, "F1,F2,F3[,G2], e.g. uniform:0,1,normal:0,1,...");
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"validate", "check groundedness, margins and 2-increasingness"},
      {"coeffs", "dependence coefficients"},
      {"mixing", "beta/phi/psi decay table of the chain"},
      {"perturb-eval", "CDF grid of a perturbed copula"},
      {"noise-eval", "CDF grid of a noise copula"},
      {"simulate", "sample a Markov chain"},
      {"regions", "reachability map as a 0/1 grid"},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    const std::string name = s.name;
    if (name == "mixing") sub->add_option("--n-max", o.n_max, "largest power (<= 8)");
    if (name == "noise-eval" || name == "regions") noise(sub);
    if (name == "perturb-eval" || name == "noise-eval") {
      sub->add_option("--points", o.points, "points per axis of the output grid");
    }
    if (name == "simulate") {
      sub->add_option("--len", o.len, "chain length");
      sub->add_option("--start", o.start, "initial state (stationary start when absent)");
    }
    if (name == "regions") {
      sub->add_option("--resolution", o.resolution, "cells per axis");
      sub->add_option("--steps", o.steps, "1 or 2");
    }
    sub->callback([&o, name] { o.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kMalformed;
  }
  return run(o);
}
