#include "nmgauge/nishimori.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "nmgauge/errors.hpp"
#include "nmgauge/gibbs.hpp"

namespace nmgauge {

namespace {

double signed_sum(const Eigen::VectorXd& w, BasisMask mask) {
  double s = 0.0;
  for (Eigen::Index b = 0; b < w.size(); ++b)
    s += (std::popcount(static_cast<BasisMask>(b) & mask) & 1) ? -w[b] : w[b];
  return s;
}

}  // namespace

ClassicalBetas classical_betas(const Model& model, double quantum_beta, const NishimoriOptions& opts) {
  ClassicalBetas out;
  out.by_family.resize(model.families.size(), 0.0);
  for (std::size_t f = 0; f < model.families.size(); ++f) {
    const int p = model.families[f].p;
    if (is_random(model.ensemble, p)) {
      out.by_family[f] = opts.classical_beta_scale * nishimori_beta(model.ensemble, p);
      continue;
    }
    if (deterministic_coupling(model.ensemble, p) == 0.0) continue;
    if (opts.deterministic_field == FieldBetaPolicy::reject)
      throw ConfigError("ensemble.p" + std::to_string(p),
                        "family has a nonzero deterministic coupling; no Nishimori temperature exists for it");
    out.by_family[f] = opts.classical_beta_scale * quantum_beta;
    out.on_manifold = false;
    out.flags.push_back("deterministic p=" + std::to_string(p) + " coupling weighted at quantum beta");
  }
  if (opts.classical_beta_scale != 1.0) {
    out.on_manifold = false;
    std::ostringstream os;
    os << "classical betas scaled by " << opts.classical_beta_scale << " (off manifold)";
    out.flags.push_back(os.str());
  }
  return out;
}

double nishimori_temperature(const Model& model) {
  double beta = -1.0;
  for (const auto& fam : model.families) {
    if (!is_random(model.ensemble, fam.p)) continue;
    const double b = nishimori_beta(model.ensemble, fam.p);
    if (beta < 0.0) {
      beta = b;
    } else if (std::abs(b - beta) > 1e-12 * std::max(1.0, std::abs(beta))) {
      throw ConfigError("thermal.nishimori", "families disagree on the Nishimori temperature; give beta explicitly");
    }
  }
  if (beta < 0.0) throw ConfigError("thermal.nishimori", "no random family defines a Nishimori temperature");
  if (!(beta > 0.0)) throw ConfigError("thermal.nishimori", "Nishimori temperature is not positive");
  return beta;
}

ClassicalNMState::ClassicalNMState(int n_sites, std::span<const BondFamily> families, const CouplingSample& J,
                                   std::span<const double> beta_by_family, int max_sites) {
  if (n_sites > max_sites)
    throw BudgetError("classical enumeration limited to " + std::to_string(max_sites) + " spins");
  if (beta_by_family.size() != families.size() || J.by_family.size() != families.size())
    throw std::invalid_argument("classical state: family count mismatch");
  Eigen::VectorXd log_w = Eigen::VectorXd::Zero(Eigen::Index{1} << n_sites);
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (beta_by_family[f] == 0.0) continue;
    log_w += beta_by_family[f] * family_field(n_sites, families[f], J.by_family[f]);
  }
  weights_ = (log_w.array() - log_w.maxCoeff()).exp().matrix();
  weights_ /= weights_.sum();
}

double ClassicalNMState::correlator(BasisMask X) const { return X == 0 ? 1.0 : signed_sum(weights_, X); }

double classical_nm_correlator(const ClassicalNMState& state, const SiteSet& X) {
  return state.correlator(site_mask(X));
}

std::size_t ObservationPlan::pair_index(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  const std::size_t n = targets.size();
  if (b >= n) throw std::out_of_range("observation pair out of range");
  // Row-major upper triangle including the diagonal.
  return a * n - a * (a - 1) / 2 + (b - a);
}

ObservationPlan make_plan(const Model& model, bool include_bonds) {
  ObservationPlan plan;
  plan.n_sites = model.n_sites();
  std::map<BasisMask, bool> seen;
  auto add = [&](const SiteSet& X) {
    const BasisMask m = site_mask(X);
    if (seen.emplace(m, true).second) {
      plan.targets.push_back(X);
      plan.masks.push_back(m);
    }
  };
  for (Site i = 0; i < model.n_sites(); ++i) add({i});
  if (include_bonds)
    for (const auto& fam : model.families)
      for (const auto& X : fam.bonds) add(X);
  for (std::size_t a = 0; a < plan.targets.size(); ++a)
    for (std::size_t b = a; b < plan.targets.size(); ++b) plan.pairs.emplace_back(a, b);
  return plan;
}

std::string describe(const SiteSet& X) {
  std::string s = "{";
  for (std::size_t k = 0; k < X.size(); ++k) s += (k ? " " : "") + std::to_string(X[k]);
  return s + "}";
}

std::vector<double> evaluate_realization(const Model& model, const ObservationPlan& plan, const CouplingSample& J,
                                         ThermalPoint thermal, std::span<const double> classical_beta) {
  const int n = model.n_sites();
  const auto H = assemble_hamiltonian(n, model.families, J, thermal.h);
  const SpectralGibbs sg(H, thermal.beta, {.force_dense = false, .max_spins = model.limits.quantum_spins});
  const ClassicalNMState cl(n, model.families, J, classical_beta, model.limits.classical_spins);
  const Eigen::VectorXd rho = sg.density_diagonal();

  std::vector<double> row(plan.columns());
  const std::size_t nt = plan.n_targets();
  std::vector<Eigen::VectorXd> ops(nt);
  for (std::size_t a = 0; a < nt; ++a) {
    ops[a] = z_product_diagonal(n, plan.masks[a]);
    row[plan.col_quantum_one(a)] = rho.dot(ops[a]);
    row[plan.col_classical_one(a)] = cl.correlator(plan.masks[a]);
  }

  std::vector<Eigen::MatrixXd> eig;
  std::optional<DuhamelKernel> kernel;
  if (!sg.diagonal_basis()) {
    kernel.emplace(sg);
    eig.reserve(nt);
    for (const auto& op : ops) eig.push_back(sg.to_eigenbasis(op));
  }

  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    const auto [a, b] = plan.pairs[k];
    const BasisMask joint = plan.masks[a] ^ plan.masks[b];
    const double jq = signed_sum(rho, joint);
    row[plan.col_joint(k)] = jq;
    row[plan.col_duhamel(k)] = kernel ? (*kernel)(eig[a], eig[b]) : jq;
    row[plan.col_classical_two(k)] = cl.correlator(joint);
  }
  return row;
}

IdentityData collect_identity_data(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                             const NishimoriOptions& opts, bool include_bonds) {
  model.validate();
  IdentityData data;
  data.thermal = thermal;
  data.betas = classical_betas(model, thermal.beta, opts);
  if (!data.betas.on_manifold && !opts.allow_off_manifold)
    throw ConfigError("ensemble", "ensemble is off the Nishimori manifold (" + data.betas.flags.front() + ")");
  data.plan = make_plan(model, include_bonds);
  const DisorderSource source(model.ensemble, model.families, spec);
  const auto& plan = data.plan;
  const auto& betas = data.betas.by_family;
  data.table = evaluate_samples(
      source,
      [&](const CouplingSample& J) { return evaluate_realization(model, plan, J, thermal, betas); },
      plan.columns(), opts.execution);
  return data;
}

IdentityReport compare_paired(std::string identity, std::string observable, std::span<const double> lhs,
                              std::span<const double> rhs, std::span<const double> weights, AverageMethod method) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.observable = std::move(observable);
  r.lhs = disorder_average(lhs, weights, method);
  r.rhs = disorder_average(rhs, weights, method);
  r.diff = r.lhs.estimate - r.rhs.estimate;
  if (method == AverageMethod::mc) {
    std::vector<double> d(lhs.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = lhs[i] - rhs[i];
    const double se = jackknife_error(d);
    r.sigmas = se > 0.0 ? std::abs(r.diff) / se : (r.diff == 0.0 ? 0.0 : INFINITY);
  } else {
    r.sigmas = std::abs(r.diff);
  }
  return r;
}

namespace {

template <class Lhs, class Rhs>
IdentityReport paired(const IdentityData& d, std::string identity, std::string observable, Lhs lhs, Rhs rhs) {
  const auto l = row_values(d.table, lhs);
  const auto r = row_values(d.table, rhs);
  return compare_paired(std::move(identity), std::move(observable), l, r, d.table.weights, d.table.method);
}

std::string pair_name(const ObservationPlan& plan, std::size_t k) {
  const auto [a, b] = plan.pairs[k];
  return describe(plan.targets[a]) + "," + describe(plan.targets[b]);
}

}  // namespace

std::vector<IdentityReport> verify_one_point(const IdentityData& d) {
  std::vector<IdentityReport> out;
  const auto& plan = d.plan;
  for (std::size_t a = 0; a < plan.n_targets(); ++a) {
    const auto q = plan.col_quantum_one(a), c = plan.col_classical_one(a);
    out.push_back(paired(d, "one_point", describe(plan.targets[a]),
                         [q](std::span<const double> r) { return r[q]; },
                         [q, c](std::span<const double> r) { return r[q] * r[c]; }));
  }
  return out;
}

std::vector<IdentityReport> verify_two_point(const IdentityData& d) {
  std::vector<IdentityReport> out;
  const auto& plan = d.plan;
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    const auto [a, b] = plan.pairs[k];
    const auto qa = plan.col_quantum_one(a), qb = plan.col_quantum_one(b);
    const auto c2 = plan.col_classical_two(k), jq = plan.col_joint(k);
    const auto name = pair_name(plan, k);
    out.push_back(paired(d, "two_point_product", name,
                         [=](std::span<const double> r) { return r[qa] * r[qb]; },
                         [=](std::span<const double> r) { return r[qa] * r[qb] * r[c2]; }));
    out.push_back(paired(d, "two_point_joint", name,
                         [=](std::span<const double> r) { return r[jq]; },
                         [=](std::span<const double> r) { return r[jq] * r[c2]; }));
  }
  return out;
}

std::vector<IdentityReport> verify_duhamel_identity(const IdentityData& d) {
  std::vector<IdentityReport> out;
  const auto& plan = d.plan;
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    const auto [a, b] = plan.pairs[k];
    const auto qa = plan.col_quantum_one(a), qb = plan.col_quantum_one(b);
    const auto c2 = plan.col_classical_two(k), du = plan.col_duhamel(k);
    const auto name = pair_name(plan, k);
    out.push_back(paired(d, "duhamel", name,
                         [=](std::span<const double> r) { return r[du]; },
                         [=](std::span<const double> r) { return r[du] * r[c2]; }));
    out.push_back(paired(d, "truncated_duhamel", name,
                         [=](std::span<const double> r) { return r[du] - r[qa] * r[qb]; },
                         [=](std::span<const double> r) { return (r[du] - r[qa] * r[qb]) * r[c2]; }));
  }
  return out;
}

std::vector<IdentityReport> verify_nm_moment(const Model& model, const SourceSpec& spec,
                                             const NishimoriOptions& opts) {
  model.validate();
  NishimoriOptions o = opts;
  o.allow_off_manifold = true;
  const auto betas = classical_betas(model, 1.0, o);
  for (const auto& fam : model.families)
    if (!is_random(model.ensemble, fam.p) && deterministic_coupling(model.ensemble, fam.p) != 0.0)
      throw ConfigError("ensemble.p" + std::to_string(fam.p), "moment identity needs every coupling random or zero");
  const auto plan = make_plan(model);
  const DisorderSource source(model.ensemble, model.families, spec);
  const int n = model.n_sites();
  const auto table = evaluate_samples(
      source,
      [&](const CouplingSample& J) {
        const ClassicalNMState cl(n, model.families, J, betas.by_family, model.limits.classical_spins);
        std::vector<double> row(plan.pairs.size());
        for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
          const auto [a, b] = plan.pairs[k];
          row[k] = cl.correlator(plan.masks[a] ^ plan.masks[b]);
        }
        return row;
      },
      plan.pairs.size(), opts.execution);

  std::vector<IdentityReport> out;
  const std::string label = opts.classical_beta_scale == 1.0 ? "nm_moment" : "nm_moment_off_manifold";
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    const auto sq = row_values(table, [k](std::span<const double> r) { return r[k] * r[k]; });
    const auto lin = row_values(table, [k](std::span<const double> r) { return r[k]; });
    out.push_back(compare_paired(label, pair_name(plan, k), sq, lin, table.weights, table.method));
  }
  return out;
}

bool passes(const IdentityReport& r, const Tolerances& tol) {
  switch (r.lhs.method) {
    case AverageMethod::mc: return r.sigmas <= tol.mc_sigmas;
    case AverageMethod::quadrature: return r.sigmas <= tol.quadrature;
    case AverageMethod::enumeration: return r.sigmas <= tol.enumeration;
  }
  return false;
}

}  // namespace nmgauge
