#pragma once

#include "copulab/grid.hpp"
#include "copulab/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace copulab {

using Function1 = std::function<double(double)>;
using Function2 = std::function<double(double, double)>;

class Copula;

struct PiNode {};
struct FrechetMNode {};
struct FrechetWNode {};

/// Standard Frank family, C(u,v) = -(1/l) ln(1 + (e^{-lu}-1)(e^{-lv}-1)/(e^{-l}-1)).
struct FrankNode {
  double lambda;
};

/// Farlie-Gumbel-Morgenstern, C(u,v) = uv + t uv(1-u)(1-v).
struct FgmNode {
  double theta;
};

/// Absolutely continuous copula given by its density. The optional closures are exact
/// shortcuts for the CDF and its partials; when absent they are obtained by Gauss-Legendre
/// quadrature of the density.
struct DensityNode {
  std::string name;
  Function2 density;
  Function2 cdf;
  Function2 partial_u;
  Function2 partial_v;
};

struct GridNode {
  GridCopula grid;
  std::string name;
};

struct MixtureNode {
  std::vector<double> weights;
  std::vector<Copula> components;
  std::string name;
};

/// Copula defined by closures over other models (perturbations, noise copulas, ad-hoc CDFs).
///
/// Missing partials fall back to central differences of `cdf`; a missing density falls back
/// to a mixed second difference unless `fd_density` is false. `main_atom(x)` / `anti_atom(x)`
/// give the conditional mass that Y puts on y = x / y = 1 - x given X = x.
struct TransformedNode {
  std::string name;
  Function2 cdf;
  Function2 partial_u;
  Function2 partial_v;
  Function2 density;
  Function1 main_atom;
  Function1 anti_atom;
  bool fd_density = true;
  /// Kernels are smooth in both slots, so fold products may use the kernel quadrature.
  bool smooth = false;
};

/// Immutable, cheaply copyable bivariate copula model.
class Copula {
 public:
  using Node = std::variant<PiNode, FrechetMNode, FrechetWNode, FrankNode, FgmNode, DensityNode,
                            GridNode, MixtureNode, TransformedNode>;

  static Copula pi();
  static Copula frechet_m();
  static Copula frechet_w();
  static Copula frank(double lambda);
  static Copula fgm(double theta);
  static Copula density_backed(DensityNode node);
  static Copula grid(GridCopula grid, std::string name = "grid");
  /// Convex combination; zero weights are dropped and a single survivor is returned as is.
  static Copula mixture(std::vector<double> weights, std::vector<Copula> components,
                        std::string name = {});
  static Copula transformed(TransformedNode node);

  const Node& node() const { return *node_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(node_.get());
  }

  std::string name() const;

 private:
  explicit Copula(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double cdf(const Copula& c, UnitPoint p);
/// Unchecked overload; arguments are clamped to [0,1].
double cdf(const Copula& c, double u, double v);

/// Density of the absolutely continuous part (mixture weights included). `singular_part`
/// flags models whose measure also has mass on a line (M, W and their mixtures).
struct DensityValue {
  double value = 0.0;
  bool singular_part = false;
};

DensityValue density(const Copula& c, UnitPoint p);
DensityValue density(const Copula& c, double u, double v);

/// dC/du at (x, v): the transition probability P(X_{n+1} <= v | X_n = x).
double cond_cdf(const Copula& c, double x, double v);
/// dC/dv at (u, y): P(X_n <= u | X_{n+1} = y).
double cond_cdf_v(const Copula& c, double u, double y);

/// Smallest v with cond_cdf(x, v) >= q (bisection to 1e-10); atoms are returned exactly.
double cond_quantile(const Copula& c, double x, double q);

/// Conditional masses that the transition from x puts on the lines y = x and y = 1 - x.
struct Atoms {
  double main = 0.0;
  double anti = 0.0;
};

Atoms atoms(const Copula& c, double x);
/// Total mass on the main diagonal.
double singular_m_mass(const Copula& c);
/// True when the model carries no singular component.
bool is_absolutely_continuous(const Copula& c);

/// True for models whose conditional CDFs are smooth in both slots (Pi, Frank, FGM,
/// density-backed and transformed models flagged smooth).
bool has_smooth_kernels(const Copula& c);

/// Sup distance of two CDFs over the (n+1)^2 nodes of a uniform grid.
double sup_distance(const Copula& a, const Copula& b, int n = 64);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationReport {
  bool pass = false;
  int n = 0;
  double tol = 0.0;
  double ground_error = 0.0;   // max |C(0,v)|, |C(u,0)|
  double margin_error = 0.0;   // max |C(u,1) - u|, |C(1,v) - v|
  double min_volume = 0.0;     // most negative rectangle volume (0 if none)
  std::string worst_check;     // "ground", "margin", "2-increasing" or empty
  double worst_u = 0.0;
  double worst_v = 0.0;
};

/// Checks groundedness, uniform margins and 2-increasingness on an n x n grid.
ValidationReport validate(const Copula& c, int n = 64, double tol = 1e-6);

struct MarginReport {
  bool pass = false;
  double max_deviation = 0.0;
  std::string worst_margin;   // "row" (integral over u) or "column" (integral over v)
  double worst_at = 0.0;
};

/// Max deviation from 1 of the integrals of a density along each coordinate, using a
/// composite Simpson rule with `intervals` intervals evaluated at the rule's nodes.
MarginReport density_unit_margins(const Function2& density, double tol, int intervals = 256);

// ---------------------------------------------------------------------------
// Constructors for density families and ad-hoc models
// ---------------------------------------------------------------------------

/// Inputs of the m1..m4 density family built from two bounded functions.
struct MDensitySpec {
  Function1 h;
  Function1 g;
  int variant = 1;
  std::string h_label = "h";
  std::string g_label = "g";
};

/// Extrema and L1 norms entering the m-density constants.
struct MDensityConstants {
  double a1 = 0.0;  // sup h
  double a2 = 0.0;  // sup g
  double b1 = 0.0;  // inf h
  double b2 = 0.0;  // inf g
  double norm_h = 0.0;
  double norm_g = 0.0;
};

MDensityConstants m_density_constants(const Function1& h, const Function1& g);
/// The density m_variant(x, y) as a closure.
Function2 m_density(const MDensitySpec& spec);
/// Builds the copula; throws NotADensity when the density is negative somewhere on a
/// 256 x 256 sample grid or its margins deviate from 1 by more than 1e-6.
Copula make_m_copula(const MDensitySpec& spec);

/// Model from a bare CDF closure (no checks, no density).
Copula make_cdf_copula(std::string name, Function2 cdf);

/// Extremum search used for the m-density constants: 4097-point scan, then golden-section
/// refinement around the best sample.
double scan_sup(const Function1& f);
double scan_inf(const Function1& f);

}  // namespace copulab
