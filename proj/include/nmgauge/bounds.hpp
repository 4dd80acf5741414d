#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nmgauge/nishimori.hpp"

namespace nmgauge {

/// One link of an inequality chain: value, then its relation to the next link.
struct ChainLink {
  enum class Relation { equal, less_equal, end };
  std::string label;
  double value = 0.0;
  Relation to_next = Relation::end;
};

struct BoundReport {
  std::string name;
  double quantity = 0.0;
  double quantity_error = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - quantity; negative values are findings
  std::vector<ChainLink> chain;
  ThermalPoint thermal;
  AverageMethod method = AverageMethod::enumeration;
  std::vector<std::string> flags;
};

/// Largest violation over the chain's links (<= 0 when every link holds
/// exactly): a - b for "<=" links, |a - b| for "=" links.
double worst_chain_violation(const BoundReport& r);

/// E<o_1^2> <= sqrt(E<(|Lambda|^{-1} sum_i tau_i)^2>_NM). Requires mu_1 = Delta_1 = 0.
BoundReport long_range_order_bound(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                   const NishimoriOptions& opts = {});

/// E<o_1> <= sqrt(|Lambda|^{-1} sum_i E<tau_i>_NM).
BoundReport magnetization_bound(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                const NishimoriOptions& opts = {});

struct SusceptibilityReport {
  BoundReport bound;             // m_L'(0) vs (2 beta/|Lambda|) sum_ij sqrt(E<tau_i tau_j>_NM)
  double c_candidate = 0.0;      // (1/|Lambda|) sum_ij sqrt(E<tau_i tau_j>_NM)
  double finite_difference = 0.0;
  double fd_relative_error = 0.0;
  double max_abs_truncated = 0.0;  // max over samples and pairs of |(s_i; s_j)|
  int clamped_correlators = 0;     // negative E<tau_i tau_j> clamped to 0
};

/// Works on with_uniform_field(model, 0): Delta_1 = mu_1 = 0 is enforced.
SusceptibilityReport susceptibility_bound(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                          double fd_step = 1e-5, const NishimoriOptions& opts = {});

struct MagnetizationPoint {
  double mu1 = 0.0;
  DisorderAverage m;        // E<o_1>
  DisorderAverage m_prime;  // (beta/|Lambda|) sum_ij E(s_i; s_j)
};

MagnetizationPoint magnetization_response(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                          double mu1, Execution exec = Execution::parallel);

struct A2Row {
  double mu1 = 0.0;
  double m = 0.0;
  double m_prime = 0.0;
  double m_prime_at_zero = 0.0;
  bool below_zero_field = false;  // m'(mu1) <= m'(0); reported, never asserted
};

std::vector<A2Row> a2_probe(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                            const std::vector<double>& mu1_grid, Execution exec = Execution::parallel);

struct DerivativeCheck {
  std::string observable;
  double finite_difference = 0.0;
  double analytic = 0.0;
  double relative_error = 0.0;
};

/// d<f>/d mu_p by central differences against beta |B_p| (f; o_p), for one
/// realization; mu_p shifts every coupling of family `family`.
DerivativeCheck check_expectation_derivative(const Model& model, const CouplingSample& J, ThermalPoint thermal,
                                             std::size_t family, const Eigen::VectorXd& f, std::string name,
                                             double step = 1e-5);
/// d psi_L / d mu_p against beta (|B_p| / |Lambda|) <o_p>.
DerivativeCheck check_pressure_derivative(const Model& model, const CouplingSample& J, ThermalPoint thermal,
                                          std::size_t family, double step = 1e-5);

struct Thermodynamics {
  DisorderAverage magnetization;  // E<o_1>
  DisorderAverage o1_squared;     // E<o_1^2>
  DisorderAverage susceptibility; // (beta/|Lambda|) sum_ij E(s_i; s_j)
  DisorderAverage pressure;       // p_L = E psi_L
  std::vector<DisorderAverage> order_parameters;  // E<o_p> per family
};

Thermodynamics measure_thermodynamics(const Model& model, const SourceSpec& spec, ThermalPoint thermal,
                                      Execution exec = Execution::parallel);

}  // namespace nmgauge
