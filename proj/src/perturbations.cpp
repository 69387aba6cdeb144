#include "copulab/perturbations.hpp"

#include "copulab/format.hpp"

#include <cerrno>
#include <cstdlib>

namespace copulab {

namespace {

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
}

bool has_density(const Copula& c) {
  try {
    (void)density(c, 0.5, 0.5);
    return true;
  } catch (const NoDensity&) {
    return false;
  }
}

Copula validated(Copula c) {
  const ValidationReport r = validate(c, 64, 1e-6);
  if (!r.pass) {
    throw NotACopula(c.name() + " fails the " + r.worst_check + " check at (" +
                     detail::num(r.worst_u) + ", " + detail::num(r.worst_v) + ")");
  }
  return c;
}

}  // namespace

PerturbationParams parse_perturbation(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  PerturbationParams p;
  if (kind == "none") {
    p.kind = PerturbationKind::None;
  } else if (kind == "dolati") {
    p.kind = PerturbationKind::Dolati;
  } else if (kind == "tilde") {
    p.kind = PerturbationKind::TildePi;
  } else if (kind == "hat") {
    p.kind = PerturbationKind::HatM;
  } else if (kind == "mesiar") {
    p.kind = PerturbationKind::Mesiar;
  } else {
    throw SpecError("perturb: unknown kind '" + kind + "'");
  }
  const bool needs_theta = p.kind == PerturbationKind::TildePi || p.kind == PerturbationKind::HatM ||
                           p.kind == PerturbationKind::Mesiar;
  if (!needs_theta) {
    if (colon != std::string::npos) throw SpecError("perturb: '" + kind + "' takes no theta");
    return p;
  }
  if (colon == std::string::npos) throw SpecError("perturb: '" + kind + "' needs ':theta'");
  const std::string value = text.substr(colon + 1);
  char* end = nullptr;
  errno = 0;
  p.theta = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0' || errno != 0) {
    throw SpecError("perturb: theta '" + value + "' is not a number");
  }
  if (!(p.theta >= 0.0 && p.theta <= 1.0)) throw SpecError("perturb: theta must lie in [0,1]");
  return p;
}

std::string to_string(const PerturbationParams& p) {
  switch (p.kind) {
    case PerturbationKind::None: return "none";
    case PerturbationKind::Dolati: return "dolati";
    case PerturbationKind::TildePi: return "tilde:" + detail::num(p.theta);
    case PerturbationKind::HatM: return "hat:" + detail::num(p.theta);
    case PerturbationKind::Mesiar: return "mesiar:" + detail::num(p.theta);
  }
  return "none";
}

Copula tilde(const Copula& c, double theta) {
  check_theta(theta);
  return Copula::mixture({1.0 - theta, theta}, {c, Copula::pi()},
                         "tilde(" + c.name() + "," + detail::num(theta) + ")");
}

Copula hat(const Copula& c, double theta) {
  check_theta(theta);
  return Copula::mixture({1.0 - theta, theta}, {c, Copula::frechet_m()},
                         "hat(" + c.name() + "," + detail::num(theta) + ")");
}

Copula mesiar(const Copula& c, double theta) {
  check_theta(theta);
  TransformedNode node;
  node.name = "mesiar(" + c.name() + "," + detail::num(theta) + ")";
  node.cdf = [c, theta](double x, double y) {
    const double k = cdf(c, x, y);
    return k + theta * (x - k) * (y - k);
  };
  node.partial_u = [c, theta](double x, double y) {
    const double k = cdf(c, x, y);
    const double kx = cond_cdf(c, x, y);
    return kx + theta * ((1.0 - kx) * (y - k) - (x - k) * kx);
  };
  node.partial_v = [c, theta](double x, double y) {
    const double k = cdf(c, x, y);
    const double ky = cond_cdf_v(c, x, y);
    return ky + theta * ((x - k) * (1.0 - ky) - (y - k) * ky);
  };
  if (has_density(c)) {
    node.density = [c, theta](double x, double y) {
      const double k = cdf(c, x, y);
      const double kx = cond_cdf(c, x, y);
      const double ky = cond_cdf_v(c, x, y);
      const double d = density(c, x, y).value;
      return d * (1.0 - theta * ((x - k) + (y - k))) +
             theta * ((1.0 - kx) * (1.0 - ky) + kx * ky);
    };
  } else {
    node.fd_density = false;
  }
  node.main_atom = [c, theta](double x) {
    const double a = atoms(c, x).main;
    return a == 0.0 ? 0.0 : a * (1.0 - 2.0 * theta * (x - cdf(c, x, x)));
  };
  node.anti_atom = [c, theta](double x) {
    const double a = atoms(c, x).anti;
    return a == 0.0 ? 0.0 : a * (1.0 - theta * (1.0 - 2.0 * cdf(c, x, 1.0 - x)));
  };
  node.smooth = has_smooth_kernels(c);
  return validated(Copula::transformed(std::move(node)));
}

Copula dolati(const Copula& c) {
  TransformedNode node;
  node.name = "dolati(" + c.name() + ")";
  node.cdf = [c](double u, double v) {
    const double k = cdf(c, u, v);
    return k * (u + v - k);
  };
  node.partial_u = [c](double u, double v) {
    const double k = cdf(c, u, v);
    const double kx = cond_cdf(c, u, v);
    return kx * (u + v - k) + k * (1.0 - kx);
  };
  node.partial_v = [c](double u, double v) {
    const double k = cdf(c, u, v);
    const double ky = cond_cdf_v(c, u, v);
    return ky * (u + v - k) + k * (1.0 - ky);
  };
  if (has_density(c)) {
    node.density = [c](double u, double v) {
      const double k = cdf(c, u, v);
      const double kx = cond_cdf(c, u, v);
      const double ky = cond_cdf_v(c, u, v);
      return density(c, u, v).value * (u + v - 2.0 * k) + kx + ky - 2.0 * kx * ky;
    };
  } else {
    node.fd_density = false;
  }
  node.main_atom = [c](double x) {
    const double a = atoms(c, x).main;
    return a == 0.0 ? 0.0 : 2.0 * a * (x - cdf(c, x, x));
  };
  node.anti_atom = [c](double x) {
    const double a = atoms(c, x).anti;
    return a == 0.0 ? 0.0 : a * (1.0 - 2.0 * cdf(c, x, 1.0 - x));
  };
  node.smooth = has_smooth_kernels(c);
  return validated(Copula::transformed(std::move(node)));
}

Copula apply(const Copula& c, const PerturbationParams& p) {
  switch (p.kind) {
    case PerturbationKind::None: return c;
    case PerturbationKind::TildePi: return tilde(c, p.theta);
    case PerturbationKind::HatM: return hat(c, p.theta);
    case PerturbationKind::Mesiar: return mesiar(c, p.theta);
    case PerturbationKind::Dolati: return dolati(c);
  }
  return c;
}

}  // namespace copulab
