#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "nmgauge/disorder.hpp"
#include "nmgauge/gibbs.hpp"
#include "nmgauge/operators.hpp"

namespace nmgauge {

/// tau in {+1, -1}^Lambda.
struct GaugeConfig {
  std::vector<int> tau;

  /// tau_X = prod_{i in X} tau_i.
  int product(const SiteSet& X) const;
  /// Sites with tau_i = -1.
  BasisMask flip_mask() const;
};

GaugeConfig random_gauge(int n_sites, std::uint64_t seed, std::size_t index);

/// U(tau) = prod_j (sigma^x_j)^{(1 - tau_j)/2}, stored as the basis
/// permutation b -> b XOR mask.
struct GaugeUnitary {
  BasisMask mask = 0;

  Eigen::Index apply(Eigen::Index b) const noexcept { return b ^ static_cast<Eigen::Index>(mask); }
};

GaugeUnitary gauge_unitary(const GaugeConfig& tau);

/// U M U^dagger by index remapping.
Eigen::MatrixXd conjugate(const Eigen::MatrixXd& m, const GaugeUnitary& u);
Eigen::VectorXd conjugate(const Eigen::VectorXd& diag, const GaugeUnitary& u);

/// J_X -> J_X tau_X.
CouplingSample gauge_transform_couplings(std::span<const BondFamily> families, const CouplingSample& J,
                                         const GaugeConfig& tau);

struct InvarianceResidual {
  double matrix = 0.0;     // max |H(J tau) - U H(J) U^dagger|
  double spectrum = 0.0;   // max relative eigenvalue difference
  double log_z = 0.0;      // relative |log Z(J tau) - log Z(J)|
  double one_point = 0.0;  // max_X |<s_X>(J tau) - tau_X <s_X>(J)|
  double duhamel = 0.0;    // max_{X,Y} |(s_X,s_Y)(J tau) - tau_X tau_Y (s_X,s_Y)(J)|
};

/// Per-sample consequences of the gauge invariance of H. The one-point and
/// Duhamel transports are checked for every bond of every family.
InvarianceResidual check_hamiltonian_invariance(int n_sites, std::span<const BondFamily> families,
                                                const CouplingSample& J, const GaugeConfig& tau, double h,
                                                double beta);

/// prod_{p, X} exp((mu_p / delta_p^2) J_X (tau_X - 1)), the factor relating
/// P(J tau) to P(J).
double covariance_factor(const GaussianEnsemble& ens, std::span<const BondFamily> families, const CouplingSample& J,
                         const GaugeConfig& tau);

}  // namespace nmgauge
