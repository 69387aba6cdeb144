#include "copulab/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace copulab {

namespace {

using nlohmann::json;

double number_field(const json& j, const char* key, const std::string& path) {
  const std::string field = path + "." + key;
  if (!j.contains(key)) throw SpecError("missing field '" + field + "'");
  if (!j.at(key).is_number()) throw SpecError("field '" + field + "' must be a number");
  return j.at(key).get<double>();
}

Copula copula_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError("field '" + path + "' must be an object");
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw SpecError("missing string field '" + path + ".type'");
  }
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "pi") return Copula::pi();
    if (type == "m" || type == "frechet-m") return Copula::frechet_m();
    if (type == "w" || type == "frechet-w") return Copula::frechet_w();
    if (type == "frank") {
      const double lambda = number_field(j, "lambda", path);
      if (lambda == 0.0) throw SpecError("field '" + path + ".lambda' must be non-zero");
      return Copula::frank(lambda);
    }
    if (type == "fgm") {
      const double theta = number_field(j, "theta", path);
      if (!(theta >= 0.0 && theta <= 1.0)) throw SpecError("field '" + path + ".theta' must lie in [0,1]");
      return Copula::fgm(theta);
    }
    if (type == "mixture") {
      if (!j.contains("weights") || !j.at("weights").is_array()) {
        throw SpecError("field '" + path + ".weights' must be an array");
      }
      if (!j.contains("components") || !j.at("components").is_array()) {
        throw SpecError("field '" + path + ".components' must be an array");
      }
      std::vector<double> weights;
      for (const json& w : j.at("weights")) {
        if (!w.is_number()) throw SpecError("field '" + path + ".weights' must hold numbers");
        weights.push_back(w.get<double>());
      }
      std::vector<Copula> components;
      const json& comps = j.at("components");
      for (std::size_t k = 0; k < comps.size(); ++k) {
        components.push_back(copula_from_json(comps[k], path + ".components[" + std::to_string(k) + "]"));
      }
      return Copula::mixture(std::move(weights), std::move(components));
    }
    if (type == "m-density") {
      MDensitySpec spec;
      spec.variant = static_cast<int>(number_field(j, "variant", path));
      for (const char* key : {"h", "g"}) {
        if (!j.contains(key) || !j.at(key).is_string()) {
          throw SpecError("field '" + path + "." + key + "' must be a poly:[...] string");
        }
      }
      spec.h_label = j.at("h").get<std::string>();
      spec.g_label = j.at("g").get<std::string>();
      spec.h = parse_polynomial(spec.h_label, path + ".h");
      spec.g = parse_polynomial(spec.g_label, path + ".g");
      return make_m_copula(spec);
    }
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError("field '" + path + "': " + e.what());
  }
  throw SpecError("field '" + path + ".type' has unknown value '" + type + "'");
}

}  // namespace

Function1 parse_polynomial(const std::string& text, const std::string& field) {
  const std::string prefix = "poly:";
  if (text.rfind(prefix, 0) != 0) throw SpecError("field '" + field + "' must start with poly:");
  json coeffs;
  try {
    coeffs = json::parse(text.substr(prefix.size()));
  } catch (const json::exception&) {
    throw SpecError("field '" + field + "' has a malformed coefficient list");
  }
  if (!coeffs.is_array() || coeffs.empty()) {
    throw SpecError("field '" + field + "' needs a non-empty coefficient list");
  }
  std::vector<double> c;
  for (const json& x : coeffs) {
    if (!x.is_number()) throw SpecError("field '" + field + "' has a non-numeric coefficient");
    c.push_back(x.get<double>());
  }
  return [c](double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
}

Copula parse_copula_spec(const std::string& text) {
  std::string body = text;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw SpecError("empty copula spec");
  if (text[first] != '{') {
    std::ifstream in(text);
    if (!in) throw SpecError("copula spec is neither JSON nor a readable file: " + text);
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw SpecError(std::string("copula spec is not valid JSON: ") + e.what());
  }
  return copula_from_json(j, "copula");
}

Copula parse_noise_spec(const std::string& text, const Copula& base,
                        const std::vector<std::string>& marginals) {
  if (text == "c5-m-uniform") return c5_m_uniform_model();
  if (text == "c6-indep-uniform") return c6_indep_uniform_model();
  std::vector<Marginal> m;
  try {
    for (const std::string& s : marginals) m.push_back(parse_marginal(s));
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(std::string("field 'marginals': ") + e.what());
  }
  if (text == "c5" || text == "c6") {
    if (m.size() != 3) throw SpecError("field 'marginals' needs F1,F2,F3 for " + text);
    return text == "c5" ? c5_general(base, m[0], m[1], m[2]) : c6_general(base, m[0], m[1], m[2]);
  }
  if (text == "c7") {
    if (m.size() != 4) throw SpecError("field 'marginals' needs F1,F2,G1,G2 for c7");
    return c7_general(base, m[0], m[1], m[2], m[3]);
  }
  throw SpecError("field 'noise' has unknown value '" + text + "'");
}

}  // namespace copulab
