#pragma once

#include "copulab/copula.hpp"

#include <string>

namespace copulab {

enum class PerturbationKind { None, TildePi, HatM, Mesiar, Dolati };

struct PerturbationParams {
  PerturbationKind kind = PerturbationKind::None;
  double theta = 0.0;
};

/// Parses `tilde:0.3`, `hat:0.5`, `mesiar:0.7`, `dolati` or `none`.
PerturbationParams parse_perturbation(const std::string& text);
std::string to_string(const PerturbationParams& p);

/// (1 - theta) C + theta Pi.
Copula tilde(const Copula& c, double theta);
/// (1 - theta) C + theta M.
Copula hat(const Copula& c, double theta);
/// C + theta (x - C)(y - C). Throws NotACopula if the result fails validation.
Copula mesiar(const Copula& c, double theta);
/// C (u + v - C). Throws NotACopula if the result fails validation.
Copula dolati(const Copula& c);

Copula apply(const Copula& c, const PerturbationParams& p);

}  // namespace copulab
