#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nmgauge/disorder.hpp"
#include "nmgauge/model.hpp"
#include "nmgauge/sweep.hpp"

namespace nmgauge {

struct ThermalPoint {
  double beta = 1.0;
  double h = 0.0;
};

/// How a family without disorder (Delta_p = 0, or r_p in {0, 1}) with a
/// nonzero coupling enters the classical Nishimori weight.
enum class FieldBetaPolicy {
  quantum_beta,  // use the quantum beta for that family (flagged in reports)
  reject,        // ConfigError
};

struct NishimoriOptions {
  FieldBetaPolicy deterministic_field = FieldBetaPolicy::quantum_beta;
  /// Multiplies every classical beta_p; 1 is the manifold itself.
  double classical_beta_scale = 1.0;
  /// Identity checks refuse ensembles off the manifold unless this is set.
  bool allow_off_manifold = false;
  Execution execution = Execution::parallel;
};

/// Classical inverse temperature per family (aligned with Model::families).
struct ClassicalBetas {
  std::vector<double> by_family;
  bool on_manifold = true;
  std::vector<std::string> flags;
};

ClassicalBetas classical_betas(const Model& model, double quantum_beta, const NishimoriOptions& opts);

/// Common beta_p of the random families; throws ConfigError if they differ.
double nishimori_temperature(const Model& model);

/// Classical Gibbs weights exp(sum_p beta_p sum_X J_X^p tau_X), normalized,
/// over all 2^N configurations.
class ClassicalNMState {
 public:
  ClassicalNMState(int n_sites, std::span<const BondFamily> families, const CouplingSample& J,
                   std::span<const double> beta_by_family, int max_sites = 20);

  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  /// <tau_X>.
  double correlator(BasisMask X) const;

 private:
  Eigen::VectorXd weights_;
};

double classical_nm_correlator(const ClassicalNMState& state, const SiteSet& X);

/// Observables evaluated per realization: every single site, then every bond
/// of every family (duplicates dropped), and all unordered pairs of them.
struct ObservationPlan {
  std::vector<SiteSet> targets;
  std::vector<BasisMask> masks;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // a <= b
  int n_sites = 0;

  std::size_t n_targets() const noexcept { return targets.size(); }
  std::size_t pair_index(std::size_t a, std::size_t b) const;

  // Row layout.
  std::size_t columns() const noexcept { return 2 * targets.size() + 3 * pairs.size(); }
  std::size_t col_quantum_one(std::size_t a) const noexcept { return a; }
  std::size_t col_classical_one(std::size_t a) const noexcept { return targets.size() + a; }
  std::size_t col_joint(std::size_t k) const noexcept { return 2 * targets.size() + k; }
  std::size_t col_duhamel(std::size_t k) const noexcept { return 2 * targets.size() + pairs.size() + k; }
  std::size_t col_classical_two(std::size_t k) const noexcept { return 2 * targets.size() + 2 * pairs.size() + k; }
};

ObservationPlan make_plan(const Model& model, bool include_bonds = true);

std::string describe(const SiteSet& X);

/// One realization's row: <s_X>, <tau_X>_NM per target; <s_X s_Y>,
/// (s_X, s_Y), <tau_X tau_Y>_NM per pair.
std::vector<double> evaluate_realization(const Model& model, const ObservationPlan& plan, const CouplingSample& J,
                                         ThermalPoint thermal, std::span<const double> classical_beta);

struct IdentityData {
  ObservationPlan plan;
  SampleTable table;
  ThermalPoint thermal;
  ClassicalBetas betas;
};

IdentityData collect_identity_data(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                             const NishimoriOptions& opts, bool include_bonds = true);

struct IdentityReport {
  std::string identity;
  std::string observable;
  DisorderAverage lhs;
  DisorderAverage rhs;
  double diff = 0.0;
  double sigmas = 0.0;  // |diff| / SE of the paired difference (mc); |diff| otherwise
};

/// Builds a report from per-realization LHS/RHS values sharing one disorder stream.
IdentityReport compare_paired(std::string identity, std::string observable, std::span<const double> lhs,
                              std::span<const double> rhs, std::span<const double> weights, AverageMethod method);

std::vector<IdentityReport> verify_one_point(const IdentityData& data);
/// Product form E<s_X><s_Y> and joint form E<s_X s_Y>.
std::vector<IdentityReport> verify_two_point(const IdentityData& data);
/// Plain and truncated Duhamel functions.
std::vector<IdentityReport> verify_duhamel_identity(const IdentityData& data);

/// E<tau_X tau_Y>^2 against E<tau_X tau_Y> with classical weights only.
/// opts.classical_beta_scale != 1 gives the off-manifold control.
std::vector<IdentityReport> verify_nm_moment(const Model& model, const SourceSpec& spec,
                                             const NishimoriOptions& opts);

struct Tolerances {
  double enumeration = 1e-10;
  double quadrature = 1e-6;
  double mc_sigmas = 3.0;
  double bound_margin = 1e-9;
  double gauge = 1e-10;
  double fd_step = 1e-5;
  double fd_relative = 1e-6;
  double nm_moment = 1e-12;
};

bool passes(const IdentityReport& r, const Tolerances& tol);

}  // namespace nmgauge
