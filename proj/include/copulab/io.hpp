#pragma once

#include "copulab/copula.hpp"
#include "copulab/noise.hpp"

#include <string>
#include <vector>

namespace copulab {

/// Parses a JSON copula spec, inline (text starting with '{') or from a file path.
///   {"type":"pi"} {"type":"m"} {"type":"w"}
///   {"type":"frank","lambda":5.0} {"type":"fgm","theta":0.5}
///   {"type":"mixture","weights":[0.3,0.7],"components":[...]}
///   {"type":"m-density","variant":1,"h":"poly:[0,1]","g":"poly:[0,0,1]"}
/// Throws SpecError naming the offending field.
Copula parse_copula_spec(const std::string& text);

/// `poly:[c0,c1,...]`, constant coefficient first.
Function1 parse_polynomial(const std::string& text, const std::string& field);

/// Noise copula from an id (`c5-m-uniform`, `c6-indep-uniform`) or a general spec
/// `c5`, `c6` (margins F1,F2,F3) or `c7` (margins F1,F2,G1,G2) applied to `base`.
Copula parse_noise_spec(const std::string& text, const Copula& base,
                        const std::vector<std::string>& marginals);

}  // namespace copulab
