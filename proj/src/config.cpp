#include "nmgauge/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "nmgauge/errors.hpp"

namespace nmgauge {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.contains(k)) throw ConfigError(where.empty() ? k : where + "." + k, "unknown key");
}

template <class T>
T get(const json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where.empty() ? key : where + "." + key, e.what());
  }
}

template <class T>
T require(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where.empty() ? key : where + "." + key, "required key missing");
  return get<T>(j, where, key, T{});
}

const char* boundary_name(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

AverageMethod parse_method(const std::string& s) {
  if (s == "mc") return AverageMethod::mc;
  if (s == "quadrature") return AverageMethod::quadrature;
  if (s == "enumeration") return AverageMethod::enumeration;
  throw ConfigError("disorder.method", "expected mc, quadrature, or enumeration; got '" + s + "'");
}

int parse_order_key(const std::string& where, const std::string& k) {
  try {
    std::size_t pos = 0;
    const int p = std::stoi(k, &pos);
    if (pos != k.size() || p < 1) throw std::invalid_argument(k);
    return p;
  } catch (const std::exception&) {
    throw ConfigError(where + "." + k, "ensemble parameters must be keyed by a positive order p");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j, "", {"lattice", "families", "ensemble", "thermal", "disorder", "points", "sweep", "a2_grid",
                         "gauge", "nishimori", "tolerances", "limits", "seed", "output"});
  ExperimentConfig c;

  const json lat = j.contains("lattice") ? j.at("lattice") : throw ConfigError("lattice", "required key missing");
  reject_unknown(lat, "lattice", {"L", "d", "boundary"});
  c.L = require<int>(lat, "lattice", "L");
  c.d = get<int>(lat, "lattice", "d", 1);
  const auto bnd = get<std::string>(lat, "lattice", "boundary", "periodic");
  if (bnd == "periodic") c.boundary = Boundary::periodic;
  else if (bnd == "open") c.boundary = Boundary::open;
  else throw ConfigError("lattice.boundary", "expected periodic or open");

  if (!j.contains("families") || !j.at("families").is_array() || j.at("families").empty())
    throw ConfigError("families", "need a non-empty list of families");
  for (std::size_t f = 0; f < j.at("families").size(); ++f) {
    const auto& fj = j.at("families")[f];
    const std::string where = "families[" + std::to_string(f) + "]";
    reject_unknown(fj, where, {"p", "shapes"});
    FamilySpec fs;
    fs.p = require<int>(fj, where, "p");
    fs.shapes = get<std::vector<std::vector<std::vector<int>>>>(fj, where, "shapes", {});
    if (fs.shapes.empty()) {
      // Default shape: p consecutive sites along the first axis.
      std::vector<std::vector<int>> shape;
      for (int k = 0; k < fs.p; ++k) {
        std::vector<int> off(c.d, 0);
        off[0] = k;
        shape.push_back(off);
      }
      fs.shapes.push_back(shape);
    }
    c.families.push_back(fs);
  }

  const json ens = j.contains("ensemble") ? j.at("ensemble") : throw ConfigError("ensemble", "required key missing");
  reject_unknown(ens, "ensemble", {"kind", "params"});
  const auto kind = require<std::string>(ens, "ensemble", "kind");
  if (!ens.contains("params") || !ens.at("params").is_object())
    throw ConfigError("ensemble.params", "expected an object keyed by p");
  if (kind == "gaussian") {
    GaussianEnsemble g;
    for (const auto& [k, v] : ens.at("params").items()) {
      const std::string where = "ensemble.params." + k;
      reject_unknown(v, where, {"mu", "delta"});
      const GaussianParams gp{require<double>(v, where, "mu"), require<double>(v, where, "delta")};
      if (gp.delta < 0.0) throw ConfigError(where + ".delta", "standard deviation must be >= 0");
      g.by_order[parse_order_key("ensemble.params", k)] = gp;
    }
    c.ensemble = g;
  } else if (kind == "binomial") {
    BinomialEnsemble b;
    for (const auto& [k, v] : ens.at("params").items()) {
      const std::string where = "ensemble.params." + k;
      reject_unknown(v, where, {"mu", "r"});
      const BinomialParams bp{require<double>(v, where, "mu"), require<double>(v, where, "r")};
      if (bp.r < 0.0 || bp.r > 1.0) throw ConfigError(where + ".r", "probability must lie in [0, 1]");
      b.by_order[parse_order_key("ensemble.params", k)] = bp;
    }
    c.ensemble = b;
  } else {
    throw ConfigError("ensemble.kind", "expected gaussian or binomial");
  }

  if (j.contains("thermal")) {
    const auto& t = j.at("thermal");
    reject_unknown(t, "thermal", {"beta", "h", "nishimori"});
    c.thermal.beta = get<double>(t, "thermal", "beta", c.thermal.beta);
    c.thermal.h = get<double>(t, "thermal", "h", c.thermal.h);
    c.thermal.nishimori = get<bool>(t, "thermal", "nishimori", false);
    if (!c.thermal.nishimori && !(c.thermal.beta > 0.0)) throw ConfigError("thermal.beta", "must be positive");
  }

  c.seed = get<std::uint64_t>(j, "", "seed", 0);
  if (j.contains("disorder")) {
    const auto& dj = j.at("disorder");
    reject_unknown(dj, "disorder", {"method", "n", "order"});
    c.disorder.method = parse_method(get<std::string>(dj, "disorder", "method", "enumeration"));
    c.disorder.mc_samples = get<std::size_t>(dj, "disorder", "n", c.disorder.mc_samples);
    c.disorder.quadrature_order = get<int>(dj, "disorder", "order", c.disorder.quadrature_order);
  }

  if (j.contains("points")) {
    for (const auto& pj : j.at("points")) {
      reject_unknown(pj, "points", {"beta", "h"});
      c.points.push_back({require<double>(pj, "points", "beta"), require<double>(pj, "points", "h")});
    }
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    reject_unknown(s, "sweep", {"beta", "h", "mu1"});
    c.sweep.beta = get<std::vector<double>>(s, "sweep", "beta", {});
    c.sweep.h = get<std::vector<double>>(s, "sweep", "h", {});
    c.sweep.mu1 = get<std::vector<double>>(s, "sweep", "mu1", {});
  }
  c.a2_grid = get<std::vector<double>>(j, "", "a2_grid", {});
  if (j.contains("gauge")) {
    const auto& g = j.at("gauge");
    reject_unknown(g, "gauge", {"samples", "h_max"});
    c.gauge.samples = get<int>(g, "gauge", "samples", c.gauge.samples);
    c.gauge.h_max = get<double>(g, "gauge", "h_max", c.gauge.h_max);
  }
  if (j.contains("nishimori")) {
    const auto& n = j.at("nishimori");
    reject_unknown(n, "nishimori", {"deterministic_field_beta"});
    const auto pol = get<std::string>(n, "nishimori", "deterministic_field_beta", "quantum_beta");
    if (pol == "quantum_beta") c.field_policy = FieldBetaPolicy::quantum_beta;
    else if (pol == "reject") c.field_policy = FieldBetaPolicy::reject;
    else throw ConfigError("nishimori.deterministic_field_beta", "expected quantum_beta or reject");
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    const std::string w = "tolerances";
    reject_unknown(t, w, {"enumeration", "quadrature", "mc_sigmas", "bound_margin", "gauge", "fd_step",
                          "fd_relative", "nm_moment"});
    auto& tol = c.tolerances;
    tol.enumeration = get<double>(t, w, "enumeration", tol.enumeration);
    tol.quadrature = get<double>(t, w, "quadrature", tol.quadrature);
    tol.mc_sigmas = get<double>(t, w, "mc_sigmas", tol.mc_sigmas);
    tol.bound_margin = get<double>(t, w, "bound_margin", tol.bound_margin);
    tol.gauge = get<double>(t, w, "gauge", tol.gauge);
    tol.fd_step = get<double>(t, w, "fd_step", tol.fd_step);
    tol.fd_relative = get<double>(t, w, "fd_relative", tol.fd_relative);
    tol.nm_moment = get<double>(t, w, "nm_moment", tol.nm_moment);
  }
  if (j.contains("limits")) {
    const auto& l = j.at("limits");
    const std::string w = "limits";
    reject_unknown(l, w, {"quantum_spins", "classical_spins", "enumeration_bonds", "quadrature_nodes"});
    c.limits.quantum_spins = get<int>(l, w, "quantum_spins", c.limits.quantum_spins);
    c.limits.classical_spins = get<int>(l, w, "classical_spins", c.limits.classical_spins);
    c.limits.disorder.enumeration_bonds = get<int>(l, w, "enumeration_bonds", c.limits.disorder.enumeration_bonds);
    c.limits.disorder.quadrature_nodes = get<double>(l, w, "quadrature_nodes", c.limits.disorder.quadrature_nodes);
  }
  c.disorder.limits = c.limits.disorder;
  c.disorder.seed = c.seed;
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, "output", {"dir", "prefix"});
    c.out_dir = get<std::string>(o, "output", "dir", c.out_dir);
    c.prefix = get<std::string>(o, "output", "prefix", c.prefix);
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["lattice"] = {{"L", L}, {"d", d}, {"boundary", boundary_name(boundary)}};
  j["families"] = json::array();
  for (const auto& f : families) j["families"].push_back({{"p", f.p}, {"shapes", f.shapes}});
  json params = json::object();
  std::string kind;
  if (const auto* g = std::get_if<GaussianEnsemble>(&ensemble)) {
    kind = "gaussian";
    for (const auto& [p, gp] : g->by_order) params[std::to_string(p)] = {{"mu", gp.mu}, {"delta", gp.delta}};
  } else {
    kind = "binomial";
    for (const auto& [p, bp] : std::get<BinomialEnsemble>(ensemble).by_order)
      params[std::to_string(p)] = {{"mu", bp.mu}, {"r", bp.r}};
  }
  j["ensemble"] = {{"kind", kind}, {"params", params}};
  j["thermal"] = {{"beta", thermal.beta}, {"h", thermal.h}, {"nishimori", thermal.nishimori}};
  j["disorder"] = {{"method", to_string(disorder.method)}, {"n", disorder.mc_samples},
                   {"order", disorder.quadrature_order}};
  j["points"] = json::array();
  for (const auto& p : points) j["points"].push_back({{"beta", p.beta}, {"h", p.h}});
  j["sweep"] = {{"beta", sweep.beta}, {"h", sweep.h}, {"mu1", sweep.mu1}};
  j["a2_grid"] = a2_grid;
  j["gauge"] = {{"samples", gauge.samples}, {"h_max", gauge.h_max}};
  j["nishimori"] = {{"deterministic_field_beta",
                     field_policy == FieldBetaPolicy::quantum_beta ? "quantum_beta" : "reject"}};
  j["tolerances"] = {{"enumeration", tolerances.enumeration}, {"quadrature", tolerances.quadrature},
                     {"mc_sigmas", tolerances.mc_sigmas},     {"bound_margin", tolerances.bound_margin},
                     {"gauge", tolerances.gauge},             {"fd_step", tolerances.fd_step},
                     {"fd_relative", tolerances.fd_relative}, {"nm_moment", tolerances.nm_moment}};
  j["limits"] = {{"quantum_spins", limits.quantum_spins},
                 {"classical_spins", limits.classical_spins},
                 {"enumeration_bonds", limits.disorder.enumeration_bonds},
                 {"quadrature_nodes", limits.disorder.quadrature_nodes}};
  j["seed"] = seed;
  j["output"] = {{"dir", out_dir}, {"prefix", prefix}};
  return j;
}

static Model build_model_impl(const ExperimentConfig& c) {
  Lattice lat = build_lattice(c.L, c.d, c.limits.classical_spins);
  std::vector<BondFamily> fams;
  for (std::size_t f = 0; f < c.families.size(); ++f) {
    std::vector<InteractionShape> shapes;
    for (const auto& s : c.families[f].shapes) shapes.push_back({c.families[f].p, s});
    try {
      fams.push_back(enumerate_bonds(lat, shapes, c.boundary));
    } catch (const ConfigError& e) {
      throw ConfigError("families[" + std::to_string(f) + "]", e.what());
    }
  }
  Model m{lat, std::move(fams), c.ensemble, c.limits};
  m.validate();
  return m;
}

Model ExperimentConfig::build_model() const { return build_model_impl(*this); }

ThermalPoint ExperimentConfig::thermal_point(const Model& model) const {
  if (!thermal.nishimori) return {thermal.beta, thermal.h};
  return {nishimori_temperature(model), thermal.h};
}

}  // namespace nmgauge
