#include "thermoqfi/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "thermoqfi/errors.hpp"
#include "thermoqfi/thermal.hpp"

namespace thermoqfi {

namespace {

using nlohmann::json;

const std::map<std::string, double> kDefaults = {
    {"b1", 0.0}, {"b2", 0.0}, {"jx", 0.3}, {"jy", 0.4}, {"jz", 0.2}, {"J", 0.8}, {"B", 0.6}, {"b", 0.0}, {"n", 3.0},
};

double param(const json& params, const std::string& key) {
  if (params.contains(key)) {
    if (!params[key].is_number()) throw ArgumentError("model: parameter '" + key + "' must be a number");
    return params[key].get<double>();
  }
  const auto it = kDefaults.find(key);
  if (it == kDefaults.end()) throw ArgumentError("model: missing parameter '" + key + "'");
  return it->second;
}

HamiltonianFamily field_family(std::function<HermOp(double)> build, int n) {
  HermOp g = HermOp::zero(Dims(n, 2));
  for (int k = 0; k < n; ++k) {
    std::string s(n, 'I');
    s[k] = 'Z';
    g += 0.5 * pauli::string(s);
  }
  HamiltonianFamily fam;
  fam.label = "B";
  fam.build = std::move(build);
  fam.generator = [g](double) { return g; };
  fam.second_generator = [g](double) { return HermOp::zero(g.dims()); };
  fam.linear = true;
  return fam;
}

int site_count(const json& params, double fallback) {
  const double n = params.contains("n") ? params["n"].get<double>() : fallback;
  if (n < 1 || n > 8 || n != static_cast<int>(n)) throw ArgumentError("model: 'n' must be an integer in [1, 8]");
  return static_cast<int>(n);
}

Model build_model(const json& doc) {
  if (!doc.is_object()) throw ArgumentError("model: document must be a JSON object");
  Model m;
  m.kind = doc.value("model", std::string("heisenberg2"));
  m.estimate = doc.value("estimate", std::string("T"));
  const json params = doc.value("params", json::object());
  if (!params.is_object()) throw ArgumentError("model: 'params' must be an object");
  const bool has_xi0 = doc.contains("xi0") && doc["xi0"].is_number();
  const double xi0_given = has_xi0 ? doc["xi0"].get<double>() : 0.0;
  auto xi0_or = [&](double fallback) { return has_xi0 ? xi0_given : fallback; };
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (it.value().is_number()) m.params[it.key()] = it.value().get<double>();
  }

  if (m.kind == "heisenberg2") {
    const double b1 = param(params, "b1"), b2 = param(params, "b2");
    const double jx = param(params, "jx"), jy = param(params, "jy"), jz = param(params, "jz");
    if (m.estimate == "T") {
      m.family = family_coupling_J(b1, b2, jz);
      m.family.build = [=](double) { return heisenberg_two_qubit(b1, b2, jx, jy, jz); };
      m.family.generator = [](double) { return HermOp::zero({2, 2}); };
      m.xi0 = 0.0;
    } else if (m.estimate == "J") {
      m.family = family_coupling_J(b1, b2, jz);
      m.xi0 = xi0_or(param(params, "J"));
    } else if (m.estimate == "B") {
      m.family = family_field_B(jx, jy, jz);
      m.xi0 = xi0_or(param(params, "B"));
    } else {
      throw ArgumentError("model: heisenberg2 supports estimate T, J or B");
    }
  } else if (m.kind == "heisenberg_chain") {
    const int n = site_count(params, 3);
    const double b = param(params, "b");
    const double jx = param(params, "jx"), jy = param(params, "jy"), jz = param(params, "jz");
    if (m.estimate == "T") {
      m.family = field_family([=](double) { return heisenberg_chain(n, b, jx, jy, jz); }, n);
    } else if (m.estimate == "B") {
      m.family = field_family([=](double bb) { return heisenberg_chain(n, bb, jx, jy, jz); }, n);
      m.xi0 = xi0_or(params.contains("b") ? b : param(params, "B"));
    } else {
      throw ArgumentError("model: heisenberg_chain supports estimate T or B");
    }
  } else if (m.kind == "product") {
    const int n = site_count(params, 2);
    const double b = params.contains("b") ? param(params, "b") : 1.0;
    auto build = [n](double bb) {
      HermOp h = HermOp::zero(Dims(n, 2));
      for (int k = 0; k < n; ++k) {
        std::string s(n, 'I');
        s[k] = 'Z';
        h += 0.5 * bb * pauli::string(s);
      }
      return h;
    };
    m.family = field_family(build, n);
    if (m.estimate == "T") {
      m.family.build = [build, b](double) { return build(b); };
    } else if (m.estimate == "B") {
      m.xi0 = xi0_or(b);
    } else {
      throw ArgumentError("model: product supports estimate T or B");
    }
  } else if (m.kind == "custom") {
    if (!params.contains("terms") || !params["terms"].is_array() || params["terms"].empty()) {
      throw ArgumentError("model: custom model needs a nonempty 'terms' array");
    }
    std::vector<FamilyTerm> terms;
    for (const json& t : params["terms"]) {
      const std::string letters = t.at("pauli").get<std::string>();
      terms.push_back(polynomial_term(pauli::string(letters), t.value("c0", 0.0), t.value("c1", 0.0), t.value("c2", 0.0)));
    }
    m.family = family_custom(std::move(terms), "lambda");
    m.xi0 = xi0_or(params.value("xi0", 0.0));
    if (m.estimate == "T") {
      const HermOp fixed = m.family.build(m.xi0);
      m.family.build = [fixed](double) { return fixed; };
    } else if (m.estimate != "custom") {
      throw ArgumentError("model: custom supports estimate T or custom");
    }
  } else {
    throw ArgumentError("model: unknown model '" + m.kind + "'");
  }

  m.hamiltonian = m.family.build(m.xi0);
  if (m.thermometry()) m.family.label = "T";
  json normalized = doc;
  normalized["model"] = m.kind;
  normalized["estimate"] = m.estimate;
  if (!m.thermometry()) normalized["xi0"] = m.xi0;
  m.document = normalized.dump();
  return m;
}

}  // namespace

HermOp Model::hamiltonian_at(double x) const { return thermometry() ? hamiltonian : family.build(x); }

HermOp Model::state(double t, double x) const {
  if (thermometry()) return gibbs(hamiltonian, x).rho();
  return gibbs(family.build(x), t).rho();
}

StateJet Model::jet(double t, double x) const {
  if (thermometry()) {
    const GibbsState g = gibbs(hamiltonian, x);
    return {g.rho(), gibbs_temperature_derivative(g)};
  }
  const GibbsState g = gibbs(family.build(x), t);
  return {g.rho(), gibbs_parameter_derivative(g, family.generator(x))};
}

Model parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    return build_model(doc);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("model: ") + e.what());
  }
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("model: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

Model default_model(const std::string& estimate) {
  json doc = {{"model", "heisenberg2"}, {"params", json::object()}, {"estimate", estimate}};
  return build_model(doc);
}

Model with_overrides(const Model& m, const std::optional<std::string>& estimate, const std::optional<double>& xi0) {
  if (!estimate && !xi0) return m;
  json doc = json::parse(m.document);
  if (estimate) {
    doc["estimate"] = *estimate;
    if (!xi0) doc.erase("xi0");
  }
  if (xi0) doc["xi0"] = *xi0;
  return build_model(doc);
}

}  // namespace thermoqfi
