#include "nmgauge/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "nmgauge/errors.hpp"
#include "nmgauge/gibbs.hpp"

namespace nmgauge {

namespace {

using Row = std::span<const double>;
using Rel = ChainLink::Relation;

double mean_estimate(const SampleTable& t, const std::function<double(Row)>& f) { return average_rows(t, f).estimate; }

void require_no_field(const Model& model, const char* what) {
  const int f = model.family_index(1);
  if (f < 0) return;
  if (is_random(model.ensemble, 1) || deterministic_coupling(model.ensemble, 1) != 0.0)
    throw ConfigError("ensemble.p1", std::string(what) + " requires Delta_1 = mu_1 = 0");
}

BoundReport finish(std::string name, std::vector<ChainLink> chain, const IdentityData& d, const DisorderAverage& q) {
  BoundReport r;
  r.name = std::move(name);
  r.chain = std::move(chain);
  r.chain.back().to_next = Rel::end;
  r.quantity = q.estimate;
  r.quantity_error = q.error;
  r.bound = r.chain.back().value;
  r.margin = r.bound - r.quantity;
  r.thermal = d.thermal;
  r.method = d.table.method;
  r.flags = d.betas.flags;
  return r;
}

double clamp_sqrt(double v, int& clamped) {
  if (v < 0.0) {
    ++clamped;
    return 0.0;
  }
  return std::sqrt(v);
}

// Per-realization quantities on single sites.
struct SiteResponse {
  Eigen::VectorXd q;      // <s_i>
  Eigen::MatrixXd joint;  // <s_i s_j>
  Eigen::MatrixXd trunc;  // (s_i; s_j)
  Eigen::VectorXd rho;    // Gibbs weight of each z-basis state
  double log_z = 0.0;
};

SiteResponse site_response(const Model& model, const CouplingSample& J, ThermalPoint thermal, bool want_trunc) {
  const int n = model.n_sites();
  const auto H = assemble_hamiltonian(n, model.families, J, thermal.h);
  const SpectralGibbs sg(H, thermal.beta, {.force_dense = false, .max_spins = model.limits.quantum_spins});
  SiteResponse r;
  r.rho = sg.density_diagonal();
  const Eigen::VectorXd& rho = r.rho;
  r.log_z = sg.log_z();
  std::vector<Eigen::VectorXd> ops(n);
  r.q.resize(n);
  for (int i = 0; i < n; ++i) {
    ops[i] = z_product_diagonal(n, BasisMask{1} << i);
    r.q[i] = rho.dot(ops[i]);
  }
  r.joint.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) r.joint(i, j) = r.joint(j, i) = (rho.array() * ops[i].array() * ops[j].array()).sum();
  if (!want_trunc) return r;
  r.trunc.resize(n, n);
  if (sg.diagonal_basis()) {
    r.trunc = r.joint - r.q * r.q.transpose();
    return r;
  }
  const DuhamelKernel kernel(sg);
  std::vector<Eigen::MatrixXd> eig;
  eig.reserve(n);
  for (const auto& op : ops) eig.push_back(sg.to_eigenbasis(op));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) r.trunc(i, j) = r.trunc(j, i) = kernel(eig[i], eig[j]) - r.q[i] * r.q[j];
  return r;
}

}  // namespace

double worst_chain_violation(const BoundReport& r) {
  double worst = -INFINITY;
  for (std::size_t k = 0; k + 1 < r.chain.size(); ++k) {
    const double a = r.chain[k].value, b = r.chain[k + 1].value;
    const double v = r.chain[k].to_next == Rel::equal ? std::abs(a - b) : a - b;
    worst = std::max(worst, v);
  }
  return r.chain.size() < 2 ? 0.0 : worst;
}

BoundReport long_range_order_bound(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                   const NishimoriOptions& opts) {
  require_no_field(model, "long-range-order bound");
  NishimoriOptions o = opts;
  o.allow_off_manifold = true;
  const auto d = collect_identity_data(model, spec, thermal, o, /*include_bonds=*/false);
  const auto& plan = d.plan;
  const int n = model.n_sites();
  const double inv = 1.0 / (static_cast<double>(n) * n);

  auto site_sum = [&](auto&& term) {
    return [&plan, n, inv, term](Row r) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const auto k = plan.pair_index(i, j);
          s += term(r[plan.col_joint(k)], r[plan.col_classical_two(k)]);
        }
      return s * inv;
    };
  };
  const auto q = average_rows(d.table, site_sum([](double sq, double) { return sq; }));
  const double c1 = mean_estimate(d.table, site_sum([](double sq, double ct) { return sq * ct; }));
  const double c2 = mean_estimate(d.table, site_sum([](double sq, double ct) { return std::abs(sq) * std::abs(ct); }));
  const double c3 = mean_estimate(d.table, site_sum([](double, double ct) { return std::abs(ct); }));

  double c4 = 0.0, sum_sq = 0.0, sum_lin = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto col = plan.col_classical_two(plan.pair_index(i, j));
      const double e2 = mean_estimate(d.table, [col](Row r) { return r[col] * r[col]; });
      const double e1 = mean_estimate(d.table, [col](Row r) { return r[col]; });
      c4 += std::sqrt(e2) * inv;
      sum_sq += e2 * inv;
      sum_lin += e1 * inv;
    }
  int clamped = 0;
  std::vector<ChainLink> chain = {
      {"E<o1^2>", q.estimate, Rel::equal},
      {"sum E<s_i s_j><t_i t_j>", c1, Rel::less_equal},
      {"sum E|<s_i s_j>||<t_i t_j>|", c2, Rel::less_equal},
      {"sum E|<t_i t_j>|", c3, Rel::less_equal},
      {"sum sqrt(E<t_i t_j>^2)", c4, Rel::less_equal},
      {"sqrt(sum E<t_i t_j>^2)", std::sqrt(sum_sq), Rel::equal},
      {"sqrt(E<m_cl^2>_NM)", clamp_sqrt(sum_lin, clamped), Rel::end},
  };
  auto r = finish("long_range_order", std::move(chain), d, q);
  if (clamped) r.flags.push_back("negative NM correlator sum clamped to zero");
  return r;
}

BoundReport magnetization_bound(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                const NishimoriOptions& opts) {
  NishimoriOptions o = opts;
  o.allow_off_manifold = true;
  const auto d = collect_identity_data(model, spec, thermal, o, /*include_bonds=*/false);
  const auto& plan = d.plan;
  const int n = model.n_sites();
  const double inv = 1.0 / n;

  const auto q = average_rows(d.table, [&](Row r) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r[plan.col_quantum_one(i)];
    return s * inv;
  });
  double m1 = 0.0, m2 = 0.0, m5 = 0.0, m6 = 0.0, sum_lin = 0.0;
  int clamped = 0;
  for (int i = 0; i < n; ++i) {
    const auto qc = plan.col_quantum_one(i), cc = plan.col_classical_one(i);
    m1 += std::abs(mean_estimate(d.table, [qc](Row r) { return r[qc]; })) * inv;
    m2 += std::abs(mean_estimate(d.table, [qc, cc](Row r) { return r[qc] * r[cc]; })) * inv;
    m5 += std::sqrt(mean_estimate(d.table, [cc](Row r) { return r[cc] * r[cc]; })) * inv;
    const double e1 = mean_estimate(d.table, [cc](Row r) { return r[cc]; });
    m6 += clamp_sqrt(e1, clamped) * inv;
    sum_lin += e1 * inv;
  }
  const double m3 = mean_estimate(d.table, [&](Row r) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::abs(r[plan.col_quantum_one(i)]) * std::abs(r[plan.col_classical_one(i)]);
    return s * inv;
  });
  const double m4 = mean_estimate(d.table, [&](Row r) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::abs(r[plan.col_classical_one(i)]);
    return s * inv;
  });
  std::vector<ChainLink> chain = {
      {"E<o1>", q.estimate, Rel::less_equal},
      {"mean |E<s_i>|", m1, Rel::equal},
      {"mean |E<s_i><t_i>|", m2, Rel::less_equal},
      {"mean E|<s_i>||<t_i>|", m3, Rel::less_equal},
      {"mean E|<t_i>|", m4, Rel::less_equal},
      {"mean sqrt(E<t_i>^2)", m5, Rel::equal},
      {"mean sqrt(E<t_i>)", m6, Rel::less_equal},
      {"sqrt(mean E<t_i>)", clamp_sqrt(sum_lin, clamped), Rel::end},
  };
  auto r = finish("magnetization", std::move(chain), d, q);
  if (clamped) r.flags.push_back("negative NM one-point average clamped to zero");
  return r;
}

MagnetizationPoint magnetization_response(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                          double mu1, Execution exec) {
  const Model m = with_uniform_field(model, mu1);
  m.validate();
  const DisorderSource source(m.ensemble, m.families, spec);
  const int n = m.n_sites();
  const auto table = evaluate_samples(
      source,
      [&](const CouplingSample& J) {
        const auto sr = site_response(m, J, thermal, true);
        return std::vector<double>{sr.q.mean(), thermal.beta * sr.trunc.sum() / n};
      },
      2, exec);
  return {mu1, average_column(table, 0), average_column(table, 1)};
}

SusceptibilityReport susceptibility_bound(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                          double fd_step, const NishimoriOptions& opts) {
  require_no_field(model, "susceptibility bound");
  const Model m0 = with_uniform_field(model, 0.0);
  NishimoriOptions o = opts;
  o.allow_off_manifold = true;
  const auto d = collect_identity_data(m0, spec, thermal, o, /*include_bonds=*/false);
  const auto& plan = d.plan;
  const int n = m0.n_sites();
  const double beta = thermal.beta;
  const double pre = beta / n;

  auto trunc = [&plan](Row r, int i, int j) {
    const auto k = plan.pair_index(i, j);
    return r[plan.col_duhamel(k)] - r[plan.col_quantum_one(i)] * r[plan.col_quantum_one(j)];
  };
  auto ct = [&plan](Row r, int i, int j) { return r[plan.col_classical_two(plan.pair_index(i, j))]; };
  auto site_sum = [&](auto&& term) {
    return [&, term](Row r) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += term(r, i, j);
      return s;
    };
  };

  SusceptibilityReport out;
  const auto q = average_rows(d.table, site_sum([&](Row r, int i, int j) { return pre * trunc(r, i, j); }));
  const double s1 = mean_estimate(d.table, site_sum([&](Row r, int i, int j) { return pre * trunc(r, i, j) * ct(r, i, j); }));
  const double s2 = mean_estimate(
      d.table, site_sum([&](Row r, int i, int j) { return pre * std::abs(trunc(r, i, j)) * std::abs(ct(r, i, j)); }));
  const double s3 = mean_estimate(d.table, site_sum([&](Row r, int i, int j) { return 2.0 * pre * std::abs(ct(r, i, j)); }));

  double s4 = 0.0, s5 = 0.0;
  int clamped = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto col = plan.col_classical_two(plan.pair_index(i, j));
      s4 += 2.0 * pre * std::sqrt(mean_estimate(d.table, [col](Row r) { return r[col] * r[col]; }));
      s5 += 2.0 * pre * clamp_sqrt(mean_estimate(d.table, [col](Row r) { return r[col]; }), clamped);
    }
  for (std::size_t s = 0; s < d.table.rows(); ++s) {
    const auto r = d.table.row(s);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.max_abs_truncated = std::max(out.max_abs_truncated, std::abs(trunc(r, i, j)));
  }

  std::vector<ChainLink> chain = {
      {"m_L'(0)", q.estimate, Rel::equal},
      {"(b/N) sum E(s_i;s_j)<t_i t_j>", s1, Rel::less_equal},
      {"(b/N) sum E|(s_i;s_j)||<t_i t_j>|", s2, Rel::less_equal},
      {"(2b/N) sum E|<t_i t_j>|", s3, Rel::less_equal},
      {"(2b/N) sum sqrt(E<t_i t_j>^2)", s4, Rel::equal},
      {"(2b/N) sum sqrt(E<t_i t_j>)", s5, Rel::end},
  };
  out.bound = finish("susceptibility", std::move(chain), d, q);
  out.clamped_correlators = clamped;
  if (clamped) out.bound.flags.push_back("negative NM correlators clamped to zero");
  out.c_candidate = s5 / (2.0 * beta);

  const auto plus = magnetization_response(m0, spec, thermal, fd_step, opts.execution);
  const auto minus = magnetization_response(m0, spec, thermal, -fd_step, opts.execution);
  out.finite_difference = (plus.m.estimate - minus.m.estimate) / (2.0 * fd_step);
  out.fd_relative_error = std::abs(out.finite_difference - q.estimate) / std::abs(q.estimate);
  return out;
}

std::vector<A2Row> a2_probe(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                            const std::vector<double>& mu1_grid, Execution exec) {
  require_no_field(model, "A2 probe");
  const double chi0 = magnetization_response(model, spec, thermal, 0.0, exec).m_prime.estimate;
  std::vector<A2Row> rows;
  rows.reserve(mu1_grid.size());
  for (double mu1 : mu1_grid) {
    const auto pt = magnetization_response(model, spec, thermal, mu1, exec);
    rows.push_back({mu1, pt.m.estimate, pt.m_prime.estimate, chi0, pt.m_prime.estimate <= chi0});
  }
  return rows;
}

namespace {

CouplingSample shifted(const CouplingSample& J, std::size_t family, double delta) {
  CouplingSample out = J;
  for (double& j : out.by_family.at(family)) j += delta;
  return out;
}

DerivativeCheck make_check(std::string name, double fd, double analytic) {
  return {std::move(name), fd, analytic, std::abs(fd - analytic) / std::abs(analytic)};
}

}  // namespace

DerivativeCheck check_expectation_derivative(const Model& model, const CouplingSample& J, ThermalPoint thermal,
                                             std::size_t family, const Eigen::VectorXd& f, std::string name,
                                             double step) {
  const int n = model.n_sites();
  const SpectralGibbs::Options so{.force_dense = false, .max_spins = model.limits.quantum_spins};
  auto expect_at = [&](double delta) {
    const auto H = assemble_hamiltonian(n, model.families, shifted(J, family, delta), thermal.h);
    return gibbs_expectation(SpectralGibbs(H, thermal.beta, so), f);
  };
  const double fd = (expect_at(step) - expect_at(-step)) / (2.0 * step);
  const SpectralGibbs sg(assemble_hamiltonian(n, model.families, J, thermal.h), thermal.beta, so);
  const auto& fam = model.families.at(family);
  const double analytic =
      thermal.beta * static_cast<double>(fam.size()) * truncated_duhamel(sg, f, order_operator(n, fam));
  return make_check(std::move(name), fd, analytic);
}

DerivativeCheck check_pressure_derivative(const Model& model, const CouplingSample& J, ThermalPoint thermal,
                                          std::size_t family, double step) {
  const int n = model.n_sites();
  const SpectralGibbs::Options so{.force_dense = false, .max_spins = model.limits.quantum_spins};
  auto psi_at = [&](double delta) {
    const auto H = assemble_hamiltonian(n, model.families, shifted(J, family, delta), thermal.h);
    return pressure_density(SpectralGibbs(H, thermal.beta, so), model.lattice).psi;
  };
  const double fd = (psi_at(step) - psi_at(-step)) / (2.0 * step);
  const SpectralGibbs sg(assemble_hamiltonian(n, model.families, J, thermal.h), thermal.beta, so);
  const auto& fam = model.families.at(family);
  const double analytic = thermal.beta * static_cast<double>(fam.size()) / n *
                          gibbs_expectation(sg, order_operator(n, fam));
  return make_check("psi_L", fd, analytic);
}

Thermodynamics measure_thermodynamics(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                      Execution exec) {
  model.validate();
  const int n = model.n_sites();
  std::vector<Eigen::VectorXd> order_ops;
  for (const auto& fam : model.families) order_ops.push_back(order_operator(n, fam));
  const std::size_t cols = 4 + order_ops.size();
  const DisorderSource source(model.ensemble, model.families, spec);
  const auto table = evaluate_samples(
      source,
      [&](const CouplingSample& J) {
        const auto sr = site_response(model, J, thermal, true);
        std::vector<double> row;
        row.reserve(cols);
        row.push_back(sr.q.mean());
        row.push_back(sr.joint.sum() / (static_cast<double>(n) * n));
        row.push_back(thermal.beta * sr.trunc.sum() / n);
        row.push_back(sr.log_z / n);
        for (const auto& op : order_ops) row.push_back(sr.rho.dot(op));
        return row;
      },
      cols, exec);
  Thermodynamics t;
  t.magnetization = average_column(table, 0);
  t.o1_squared = average_column(table, 1);
  t.susceptibility = average_column(table, 2);
  t.pressure = average_column(table, 3);
  for (std::size_t f = 0; f < order_ops.size(); ++f) t.order_parameters.push_back(average_column(table, 4 + f));
  return t;
}

}  // namespace nmgauge
