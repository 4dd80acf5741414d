#include "nmgauge/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "nmgauge/errors.hpp"
#include "nmgauge/gauge.hpp"

namespace nmgauge {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string params(ThermalPoint t, const std::string& extra = {}) {
  std::string s = "beta=" + format_double(t.beta) + ";h=" + format_double(t.h);
  if (!extra.empty()) s += ";" + extra;
  return s;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string s;
  for (const auto& f : flags) s += ";flag=" + f;
  return s;
}

struct Context {
  const ExperimentConfig& cfg;
  Model model;
  ThermalPoint thermal;
  NishimoriOptions opts;
  std::vector<ReportRow> rows;

  ReportRow row(std::string suite, std::string observable, std::string parameters, AverageMethod method) const {
    ReportRow r;
    r.suite = std::move(suite);
    r.observable = std::move(observable);
    r.parameters = std::move(parameters);
    r.method = to_string(method);
    r.seed = cfg.seed;
    return r;
  }
};

void gauge_suite(Context& ctx) {
  const auto t0 = Clock::now();
  const auto& cfg = ctx.cfg;
  const auto& m = ctx.model;
  const int n = m.n_sites();
  InvarianceResidual worst;
  double covariance = 0.0;
  double involution = 0.0;
  const bool gaussian = std::holds_alternative<GaussianEnsemble>(m.ensemble);
  bool covariance_checked = gaussian;
  for (const auto& fam : m.families) covariance_checked = covariance_checked && is_random(m.ensemble, fam.p);

  for (int s = 0; s < cfg.gauge.samples; ++s) {
    const auto idx = static_cast<std::size_t>(s);
    const auto J = sample_couplings(m.ensemble, m.families, cfg.seed, idx);
    const auto tau = random_gauge(n, cfg.seed, idx);
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(s), 0x68u};
    std::mt19937_64 eng(seq);
    const double h = std::uniform_real_distribution<double>(0.0, cfg.gauge.h_max)(eng);
    const auto r = check_hamiltonian_invariance(n, m.families, J, tau, h, ctx.thermal.beta);
    worst.matrix = std::max(worst.matrix, r.matrix);
    worst.spectrum = std::max(worst.spectrum, r.spectrum);
    worst.log_z = std::max(worst.log_z, r.log_z);
    worst.one_point = std::max(worst.one_point, r.one_point);
    worst.duhamel = std::max(worst.duhamel, r.duhamel);

    const auto back = gauge_transform_couplings(m.families, gauge_transform_couplings(m.families, J, tau), tau);
    if (back.by_family != J.by_family) involution += 1.0;

    if (covariance_checked) {
      const auto& g = std::get<GaussianEnsemble>(m.ensemble);
      const auto Jt = gauge_transform_couplings(m.families, J, tau);
      double log_ratio = 0.0;
      for (std::size_t f = 0; f < m.families.size(); ++f)
        for (std::size_t k = 0; k < m.families[f].size(); ++k) {
          const auto& gp = g.at(m.families[f].p);
          log_ratio += std::log(gaussian_density(gp, Jt.by_family[f][k])) -
                       std::log(gaussian_density(gp, J.by_family[f][k]));
        }
      const double factor = covariance_factor(g, m.families, J, tau);
      covariance = std::max(covariance, std::abs(factor / std::exp(log_ratio) - 1.0));
    }
  }
  const double wall = seconds_since(t0);
  const std::string p = "beta=" + format_double(ctx.thermal.beta) + ";samples=" + std::to_string(cfg.gauge.samples) +
                        ";h_max=" + format_double(cfg.gauge.h_max);
  auto add = [&](const char* name, double value, double tol) {
    auto r = ctx.row("verify-gauge", name, p, AverageMethod::mc);
    r.estimate = value;
    r.bound = tol;
    r.margin = tol - value;
    r.pass = value <= tol;
    r.wall_time = wall;
    ctx.rows.push_back(r);
  };
  const double tol = cfg.tolerances.gauge;
  add("hamiltonian_residual", worst.matrix, tol);
  add("spectrum_residual", worst.spectrum, tol);
  add("log_z_residual", worst.log_z, tol);
  add("one_point_transport", worst.one_point, tol);
  add("duhamel_transport", worst.duhamel, tol);
  add("involution_mismatches", involution, 0.0);
  if (covariance_checked) add("covariance_factor", covariance, 1e-12);
}

void identity_rows(Context& ctx, const std::vector<IdentityReport>& reps, double wall, const std::string& p,
                   double exact_tol = -1.0) {
  for (const auto& rep : reps) {
    auto r = ctx.row("verify-identities", rep.identity + " " + rep.observable, p, rep.lhs.method);
    r.estimate = rep.lhs.estimate;
    r.error = rep.lhs.error;
    r.reference = rep.rhs.estimate;
    r.deviation = rep.sigmas;
    r.pass = exact_tol >= 0.0 && rep.lhs.method == AverageMethod::enumeration ? rep.sigmas <= exact_tol
                                                                               : passes(rep, ctx.cfg.tolerances);
    r.wall_time = wall;
    ctx.rows.push_back(r);
  }
}

void identities_suite(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& tol = cfg.tolerances;
  auto t0 = Clock::now();
  const auto data = collect_identity_data(ctx.model, cfg.disorder, ctx.thermal, ctx.opts);
  std::vector<IdentityReport> reps = verify_one_point(data);
  for (auto& v : {verify_two_point(data), verify_duhamel_identity(data)}) reps.insert(reps.end(), v.begin(), v.end());
  identity_rows(ctx, reps, seconds_since(t0), params(ctx.thermal));

  t0 = Clock::now();
  const auto moment = verify_nm_moment(ctx.model, cfg.disorder, ctx.opts);
  identity_rows(ctx, moment, seconds_since(t0), "classical;beta=beta_N", tol.nm_moment);

  t0 = Clock::now();
  NishimoriOptions off = ctx.opts;
  off.classical_beta_scale = 2.0;
  const auto control = verify_nm_moment(ctx.model, cfg.disorder, off);
  double worst = 0.0;
  for (const auto& c : control) worst = std::max(worst, c.sigmas);
  auto r = ctx.row("verify-identities", "nm_moment_off_manifold max_deviation", "classical;beta=2*beta_N",
                   cfg.disorder.method);
  r.estimate = worst;
  double threshold = tol.nm_moment;
  if (cfg.disorder.method == AverageMethod::mc) threshold = tol.mc_sigmas;
  if (cfg.disorder.method == AverageMethod::quadrature) threshold = tol.quadrature;
  threshold *= 10.0;
  r.bound = threshold;
  r.margin = worst - threshold;
  r.pass = worst > threshold;
  r.wall_time = seconds_since(t0);
  ctx.rows.push_back(r);

  // Derivative identity on the first realization, one shift per family.
  t0 = Clock::now();
  const DisorderSource src(ctx.model.ensemble, ctx.model.families, cfg.disorder);
  const auto J = src.realization(0).couplings;
  const int n = ctx.model.n_sites();
  const Eigen::VectorXd o1 = order_operator(n, field_family(ctx.model.lattice));
  for (std::size_t f = 0; f < ctx.model.families.size(); ++f) {
    const auto& fam = ctx.model.families[f];
    std::vector<DerivativeCheck> checks = {
        check_expectation_derivative(ctx.model, J, ctx.thermal, f, z_product_diagonal(n, 1), "s_0", tol.fd_step),
        check_expectation_derivative(ctx.model, J, ctx.thermal, f, z_product_diagonal(n, site_mask(fam.bonds[0])),
                                     "s_" + describe(fam.bonds[0]), tol.fd_step),
        check_expectation_derivative(ctx.model, J, ctx.thermal, f, o1, "o_1", tol.fd_step),
        check_pressure_derivative(ctx.model, J, ctx.thermal, f, tol.fd_step)};
    for (const auto& c : checks) {
      auto row = ctx.row("verify-identities", "derivative d" + c.observable + "/dmu_" + std::to_string(fam.p),
                         params(ctx.thermal, "step=" + format_double(tol.fd_step) + ";sample=0"),
                         cfg.disorder.method);
      row.estimate = c.finite_difference;
      row.reference = c.analytic;
      row.deviation = c.relative_error;
      // A vanishing derivative has no meaningful relative error.
      row.pass = std::abs(c.analytic) < 1e-12 ? std::abs(c.finite_difference) <= tol.fd_relative
                                              : c.relative_error <= tol.fd_relative;
      row.wall_time = seconds_since(t0);
      ctx.rows.push_back(row);
    }
  }
}

void bound_rows(Context& ctx, const char* suite, const BoundReport& b, double wall) {
  const auto& tol = ctx.cfg.tolerances;
  const std::string p = params(b.thermal) + join_flags(b.flags);
  auto r = ctx.row(suite, b.name, p, b.method);
  r.estimate = b.quantity;
  r.error = b.quantity_error;
  r.bound = b.bound;
  r.margin = b.margin;
  const double slack = b.method == AverageMethod::mc ? tol.mc_sigmas * b.quantity_error : 0.0;
  r.pass = b.margin >= -(tol.bound_margin + slack);
  r.wall_time = wall;
  ctx.rows.push_back(r);

  auto c = ctx.row(suite, b.name + " chain_violation", p, b.method);
  c.estimate = worst_chain_violation(b);
  c.bound = tol.bound_margin;
  c.margin = tol.bound_margin - c.estimate;
  // Chain links are exact only for exact disorder averages.
  c.pass = b.method == AverageMethod::mc || c.estimate <= tol.bound_margin;
  c.wall_time = wall;
  ctx.rows.push_back(c);
}

void bounds_suite(Context& ctx) {
  std::vector<ThermalPoint> pts = ctx.cfg.points;
  if (pts.empty()) pts.push_back(ctx.thermal);
  const bool field_free = ctx.model.family_index(1) < 0 ||
                          (!is_random(ctx.model.ensemble, 1) && deterministic_coupling(ctx.model.ensemble, 1) == 0.0);
  for (const auto& t : pts) {
    if (field_free) {
      const auto t0 = Clock::now();
      const auto b = long_range_order_bound(ctx.model, ctx.cfg.disorder, t, ctx.opts);
      bound_rows(ctx, "bounds", b, seconds_since(t0));
    }
    const auto t0 = Clock::now();
    const auto b = magnetization_bound(ctx.model, ctx.cfg.disorder, t, ctx.opts);
    bound_rows(ctx, "bounds", b, seconds_since(t0));
  }
}

void susceptibility_suite(Context& ctx) {
  const auto& tol = ctx.cfg.tolerances;
  std::vector<ThermalPoint> pts = ctx.cfg.points;
  if (pts.empty()) pts.push_back(ctx.thermal);
  for (const auto& t : pts) {
    const auto t0 = Clock::now();
    const auto s = susceptibility_bound(ctx.model, ctx.cfg.disorder, t, tol.fd_step, ctx.opts);
    const double wall = seconds_since(t0);
    bound_rows(ctx, "susceptibility", s.bound, wall);
    const std::string p = params(t);
    const auto method = s.bound.method;

    auto fd = ctx.row("susceptibility", "m_prime_finite_difference", p + ";step=" + format_double(tol.fd_step), method);
    fd.estimate = s.finite_difference;
    fd.reference = s.bound.quantity;
    fd.deviation = s.fd_relative_error;
    fd.pass = s.fd_relative_error <= tol.fd_relative;
    fd.wall_time = wall;
    ctx.rows.push_back(fd);

    auto tr = ctx.row("susceptibility", "max_abs_truncated_duhamel", p, method);
    tr.estimate = s.max_abs_truncated;
    tr.bound = 2.0;
    tr.margin = 2.0 - s.max_abs_truncated;
    tr.pass = s.max_abs_truncated <= 2.0;
    tr.wall_time = wall;
    ctx.rows.push_back(tr);

    auto c = ctx.row("susceptibility", "a1_constant_candidate", p + ";L=" + std::to_string(ctx.cfg.L), method);
    c.estimate = s.c_candidate;
    c.wall_time = wall;
    ctx.rows.push_back(c);

    if (!ctx.cfg.a2_grid.empty()) {
      const auto t1 = Clock::now();
      const auto probe = a2_probe(ctx.model, ctx.cfg.disorder, t, ctx.cfg.a2_grid, ctx.opts.execution);
      for (const auto& a : probe) {
        auto r = ctx.row("susceptibility", "a2_probe m_prime", p + ";mu1=" + format_double(a.mu1), method);
        r.estimate = a.m_prime;
        r.reference = a.m_prime_at_zero;
        r.margin = a.m_prime_at_zero - a.m_prime;
        r.wall_time = seconds_since(t1);
        ctx.rows.push_back(r);  // exploratory: A2 is an assumption, never a failure
      }
    }
  }
}

void sweep_suite(Context& ctx) {
  const auto& sw = ctx.cfg.sweep;
  const std::vector<double> betas = sw.beta.empty() ? std::vector<double>{ctx.thermal.beta} : sw.beta;
  const std::vector<double> hs = sw.h.empty() ? std::vector<double>{ctx.thermal.h} : sw.h;
  const bool vary_field = !sw.mu1.empty();
  const std::vector<double> fields = vary_field ? sw.mu1 : std::vector<double>{0.0};
  for (double mu1 : fields) {
    const Model m = vary_field ? with_uniform_field(ctx.model, mu1) : ctx.model;
    for (double beta : betas)
      for (double h : hs) {
        const ThermalPoint t{beta, h};
        const auto t0 = Clock::now();
        const auto th = measure_thermodynamics(m, ctx.cfg.disorder, t, ctx.opts.execution);
        const double wall = seconds_since(t0);
        const std::string p = params(t, vary_field ? "mu1=" + format_double(mu1) : std::string());
        auto add = [&](const std::string& name, const DisorderAverage& a) {
          auto r = ctx.row("sweep", name, p, a.method);
          r.estimate = a.estimate;
          r.error = a.error;
          r.wall_time = wall;
          ctx.rows.push_back(r);
        };
        add("m", th.magnetization);
        add("o1_squared", th.o1_squared);
        add("m_prime", th.susceptibility);
        add("p_L", th.pressure);
        for (std::size_t f = 0; f < m.families.size(); ++f)
          add("o_" + std::to_string(m.families[f].p), th.order_parameters[f]);
      }
  }
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"verify-gauge", "verify-identities", "bounds", "susceptibility",
                                                 "sweep"};
  return names;
}

bool SuiteResult::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

SuiteResult run_suite(const ExperimentConfig& config, const std::string& subcommand, Execution exec) {
  Model model = config.build_model();
  const ThermalPoint thermal = config.thermal_point(model);
  NishimoriOptions opts;
  opts.deterministic_field = config.field_policy;
  opts.execution = exec;
  Context ctx{config, std::move(model), thermal, opts, {}};
  if (subcommand == "verify-gauge") gauge_suite(ctx);
  else if (subcommand == "verify-identities") identities_suite(ctx);
  else if (subcommand == "bounds") bounds_suite(ctx);
  else if (subcommand == "susceptibility") susceptibility_suite(ctx);
  else if (subcommand == "sweep") sweep_suite(ctx);
  else throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");
  return {std::move(ctx.rows)};
}

}  // namespace nmgauge
