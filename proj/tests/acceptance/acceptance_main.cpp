// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fail.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nmgauge/bounds.hpp"
#include "nmgauge/config.hpp"
#include "nmgauge/gauge.hpp"
#include "nmgauge/runner.hpp"

using namespace nmgauge;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Lattice chain(int L) { return Lattice(L, 1, 20); }

BondFamily nn(const Lattice& lat, Boundary b = Boundary::periodic) {
  return enumerate_bonds(lat, InteractionShape{2, {{0}, {1}}}, b);
}

SourceSpec method(AverageMethod m) {
  SourceSpec s;
  s.method = m;
  return s;
}

// Sum of per-check pass counts.
struct Tally {
  std::size_t checks = 0;
  std::size_t ok = 0;
  double worst = 0.0;
  void add(const std::vector<IdentityReport>& reps, double tol) {
    for (const auto& r : reps) {
      ++checks;
      ok += r.sigmas <= tol;
      worst = std::max(worst, r.sigmas);
    }
  }
};

std::vector<IdentityReport> identity_reports(const IdentityData& d) {
  auto out = verify_one_point(d);
  for (auto&& v : {verify_two_point(d), verify_duhamel_identity(d)}) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Outcome ac1_gauge() {
  const auto t0 = Clock::now();
  const auto cfg = ExperimentConfig::from_json(json::parse(R"({
    "lattice": {"L": 6, "d": 1, "boundary": "periodic"},
    "families": [{"p": 2}, {"p": 4}],
    "ensemble": {"kind": "gaussian", "params": {"2": {"mu": 0.3, "delta": 1.0}, "4": {"mu": -0.5, "delta": 0.8}}},
    "thermal": {"beta": 1.2},
    "gauge": {"samples": 100, "h_max": 2.0},
    "seed": 2024
  })"));
  const auto res = run_suite(cfg, "verify-gauge");
  double worst = 0.0;
  bool ok = res.all_passed();
  for (const auto& r : res.rows) {
    if (r.observable == "spectrum_residual" || r.observable == "log_z_residual" ||
        r.observable == "one_point_transport") {
      worst = std::max(worst, r.estimate);
      ok = ok && r.estimate <= 1e-10;
    }
  }
  const double t = elapsed(t0);
  return {ok && t < 60.0, "100 triples, L=6, p in {2,4}: worst residual " + fmt("%.2e", worst) + ", " +
                              fmt("%.2f", t) + " s"};
}

Outcome ac2_closed_forms() {
  double worst = 0.0;
  for (double beta : {0.1, 1.0, 10.0})
    for (double h : {0.2, 1.0, 5.0}) {
      HamiltonianMatrix H;
      H.n_sites = 1;
      H.h = h;
      H.classical_diagonal = Eigen::VectorXd::Zero(2);
      const SpectralGibbs sg(H, beta);
      const double x = beta * h;
      // Z reaches e^50, so compare it relatively.
      const double z_rel = std::abs(std::expm1(sg.log_z() - std::log(2.0 * std::cosh(x))));
      Eigen::MatrixXd sx(2, 2);
      sx << 0, 1, 1, 0;
      const double sx_err = std::abs(gibbs_expectation(sg, sx) - std::tanh(x));
      const Eigen::VectorXd sz = z_product_diagonal(1, 1);
      const double d_err = std::abs(duhamel(sg, sz, sz) - std::tanh(x) / x);
      worst = std::max({worst, z_rel, sx_err, d_err});
    }
  return {worst <= 1e-12, "9 (beta, h) points: worst deviation " + fmt("%.2e", worst)};
}

Outcome ac3_identities_binomial() {
  const auto t0 = Clock::now();
  Tally tally;
  const Lattice lat = chain(4);
  for (double r : {0.8, 0.65}) {
    BinomialEnsemble b;
    b.by_order[1] = {1.0, r};
    b.by_order[2] = {1.0, r};
    const Model m{lat, {field_family(lat), nn(lat)}, b, {}};
    const double bN = nishimori_temperature(m);
    for (double h : {0.0, 0.5, 1.0}) {
      const auto d = collect_identity_data(m, method(AverageMethod::enumeration), {bN, h}, {});
      tally.add(identity_reports(d), 1e-10);
    }
  }
  const double t = elapsed(t0);
  return {tally.ok == tally.checks && t < 300.0,
          std::to_string(tally.ok) + "/" + std::to_string(tally.checks) + " identities, max |diff| " +
              fmt("%.2e", tally.worst) + ", " + fmt("%.2f", t) + " s"};
}

Outcome ac4_identities_gaussian() {
  GaussianEnsemble g;
  g.by_order[1] = {0.5, 1.0};
  g.by_order[2] = {0.5, 1.0};
  Tally quad;
  {
    // 3 random bonds: two fields and one coupling on an open pair.
    const Lattice lat = chain(2);
    const Model m{lat, {field_family(lat), nn(lat, Boundary::open)}, g, {}};
    auto spec = method(AverageMethod::quadrature);
    spec.quadrature_order = 20;
    for (double h : {0.0, 0.7})
      quad.add(identity_reports(collect_identity_data(m, spec, {nishimori_temperature(m), h}, {})), 1e-6);
  }
  {
    // 4 random bonds: a periodic ring of 4 without fields.
    GaussianEnsemble g2;
    g2.by_order[2] = {0.5, 1.0};
    const Lattice lat = chain(4);
    const Model m{lat, {nn(lat)}, g2, {}};
    auto spec = method(AverageMethod::quadrature);
    spec.quadrature_order = 20;
    quad.add(identity_reports(collect_identity_data(m, spec, {nishimori_temperature(m), 0.7}, {})), 1e-6);
  }
  Tally mc;
  {
    const Lattice lat = chain(4);
    const Model m{lat, {field_family(lat), nn(lat)}, g, {}};
    auto spec = method(AverageMethod::mc);
    spec.mc_samples = 10000;
    spec.seed = 3;
    mc.add(identity_reports(collect_identity_data(m, spec, {nishimori_temperature(m), 0.7}, {})), 3.0);
  }
  const double frac = static_cast<double>(mc.ok) / static_cast<double>(mc.checks);
  return {quad.ok == quad.checks && frac >= 0.95,
          "quadrature " + std::to_string(quad.ok) + "/" + std::to_string(quad.checks) + " (max |diff| " +
              fmt("%.2e", quad.worst) + "); mc n=1e4 " + std::to_string(mc.ok) + "/" + std::to_string(mc.checks) +
              " within 3 sigma"};
}

Outcome ac5_derivatives() {
  const Lattice lat = chain(4);
  GaussianEnsemble g;
  g.by_order[1] = {0.3, 0.8};
  g.by_order[2] = {0.6, 1.0};
  const Model m{lat, {field_family(lat), nn(lat)}, g, {}};
  const int n = m.n_sites();
  const Eigen::VectorXd o1 = order_operator(n, m.families[0]);
  std::size_t checks = 0, ok = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto J = sample_couplings(m.ensemble, m.families, 11, i);
    for (const ThermalPoint t : {ThermalPoint{0.7, 0.5}, ThermalPoint{1.5, 1.2}})
      for (std::size_t f = 0; f < m.families.size(); ++f) {
        const std::vector<DerivativeCheck> cs = {
            check_expectation_derivative(m, J, t, f, z_product_diagonal(n, 0b0010), "s_1"),
            check_expectation_derivative(m, J, t, f, z_product_diagonal(n, 0b0110), "s_{1 2}"),
            check_expectation_derivative(m, J, t, f, o1, "o_1"), check_pressure_derivative(m, J, t, f)};
        for (const auto& c : cs) {
          ++checks;
          ok += c.relative_error <= 1e-6;
          worst = std::max(worst, c.relative_error);
        }
      }
  }
  return {ok == checks, std::to_string(ok) + "/" + std::to_string(checks) + " derivatives, worst relative error " +
                            fmt("%.2e", worst)};
}

Outcome ac6_theorem1() {
  const Lattice lat = chain(4);
  const std::vector<ThermalPoint> grid = {{0.3, 0.0}, {0.3, 1.0}, {1.0, 0.5}, {1.0, 2.0}, {2.5, 0.2}, {2.5, 1.5}};
  BinomialEnsemble b;
  b.by_order[2] = {1.0, 0.85};
  const Model lro{lat, {nn(lat)}, b, {}};
  BinomialEnsemble bf = b;
  bf.by_order[1] = {1.0, 0.7};
  const Model mag{lat, {field_family(lat), nn(lat)}, bf, {}};
  const auto spec = method(AverageMethod::enumeration);
  double worst_margin = INFINITY, worst_chain = -INFINITY;
  for (const auto& t : grid) {
    for (const auto& r : {long_range_order_bound(lro, spec, t), magnetization_bound(mag, spec, t)}) {
      worst_margin = std::min(worst_margin, r.margin);
      worst_chain = std::max(worst_chain, worst_chain_violation(r));
    }
  }
  return {worst_margin >= -1e-9 && worst_chain <= 1e-9,
          "6 points x {long-range order, magnetization}: min margin " + fmt("%.3e", worst_margin) +
              ", worst chain link " + fmt("%.2e", worst_chain)};
}

Outcome ac7_susceptibility() {
  const Lattice lat = chain(4);
  const auto spec = method(AverageMethod::enumeration);
  double worst_fd = 0.0, worst_margin = INFINITY, worst_trunc = 0.0;
  for (double r : {0.85, 0.65}) {
    BinomialEnsemble b;
    b.by_order[2] = {1.0, r};
    const Model m{lat, {nn(lat)}, b, {}};
    for (const ThermalPoint t : {ThermalPoint{0.5, 0.3}, ThermalPoint{1.0, 1.0}, ThermalPoint{2.0, 0.5}}) {
      const auto s = susceptibility_bound(m, spec, t);
      worst_fd = std::max(worst_fd, s.fd_relative_error);
      worst_margin = std::min(worst_margin, s.bound.margin);
      worst_trunc = std::max(worst_trunc, s.max_abs_truncated);
    }
  }
  return {worst_fd <= 1e-6 && worst_margin >= -1e-9 && worst_trunc <= 2.0,
          "FD vs Duhamel " + fmt("%.2e", worst_fd) + ", min margin " + fmt("%.3e", worst_margin) +
              ", max |(s_i; s_j)| " + fmt("%.3f", worst_trunc)};
}

Outcome ac8_nm_moment() {
  const Lattice lat = chain(4);
  BinomialEnsemble b;
  b.by_order[1] = {1.0, 0.8};
  b.by_order[2] = {1.0, 0.7};
  const Model m{lat, {field_family(lat), nn(lat)}, b, {}};
  const auto spec = method(AverageMethod::enumeration);
  Tally on;
  on.add(verify_nm_moment(m, spec, {}), 1e-12);
  NishimoriOptions off;
  off.classical_beta_scale = 2.0;
  double off_worst = 0.0;
  for (const auto& r : verify_nm_moment(m, spec, off)) off_worst = std::max(off_worst, r.sigmas);
  return {on.ok == on.checks && off_worst > 10.0 * 1e-12,
          std::to_string(on.ok) + "/" + std::to_string(on.checks) + " pairs, max |diff| " + fmt("%.2e", on.worst) +
              "; control at 2 beta_N max |diff| " + fmt("%.3e", off_worst)};
}

// CSV with the wall-time column dropped.
std::string numeric_csv(const std::vector<ReportRow>& rows) {
  std::string out;
  for (auto r : rows) {
    r.wall_time = 0.0;
    out += csv_line(r) + "\n";
  }
  return out;
}

Outcome ac9_determinism() {
  const json base = json::parse(R"({
    "lattice": {"L": 4, "d": 1, "boundary": "periodic"},
    "families": [{"p": 2}],
    "ensemble": {"kind": "gaussian", "params": {"2": {"mu": 0.5, "delta": 1.0}}},
    "thermal": {"nishimori": true, "h": 0.7},
    "disorder": {"method": "mc", "n": 500},
    "points": [{"beta": 0.8, "h": 0.4}],
    "sweep": {"beta": [0.5, 1.0], "h": [0.3], "mu1": [0.0, 0.2]},
    "gauge": {"samples": 10},
    "seed": 77
  })");
  const auto cfg = ExperimentConfig::from_json(base);
  bool same = true;
  for (const auto& sub : subcommands()) {
    std::string reference;
    for (int threads : {1, 2, 8}) {
      omp_set_num_threads(threads);
      const auto csv = numeric_csv(run_suite(cfg, sub).rows);
      if (threads == 1) reference = csv;
      else same = same && csv == reference;
    }
  }
  omp_set_num_threads(omp_get_num_procs());
  return {same, std::to_string(subcommands().size()) + " subcommands x {1, 2, 8} threads, mc n=500: " +
                    (same ? "numeric columns identical" : "reports differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 per-sample gauge invariance", ac1_gauge},
      {"AC2 single-spin closed forms", ac2_closed_forms},
      {"AC3 exact identity suite (binomial enumeration)", ac3_identities_binomial},
      {"AC4 Gaussian identity suite (quadrature, mc)", ac4_identities_gaussian},
      {"AC5 derivative identity", ac5_derivatives},
      {"AC6 long-range order and magnetization bounds", ac6_theorem1},
      {"AC7 susceptibility bound", ac7_susceptibility},
      {"AC8 Nishimori moment identity", ac8_nm_moment},
      {"AC9 thread-count determinism", ac9_determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
