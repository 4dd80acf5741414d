#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nmgauge/operators.hpp"

namespace nmgauge {

/// Default beta*|E_m - E_n| below which the Duhamel weight uses its
/// degenerate limit.
inline constexpr double kDegenerateGapThreshold = 1e-7;

/// Eigendecomposition of one Hamiltonian realization at inverse temperature
/// beta, with Boltzmann populations computed from ground-state-shifted
/// energies so large beta cannot overflow.
///
/// A diagonal Hamiltonian (h = 0) skips the eigensolver: the eigenvectors
/// are basis vectors and only the sorting permutation is kept.
class SpectralGibbs {
 public:
  struct Options {
    bool force_dense = false;  // run the eigensolver even when H is diagonal
    int max_spins = kDefaultQuantumSpinCap;
  };

  SpectralGibbs(const HamiltonianMatrix& H, double beta);
  SpectralGibbs(const HamiltonianMatrix& H, double beta, Options opts);

  double beta() const noexcept { return beta_; }
  double log_z() const noexcept { return log_z_; }
  Eigen::Index dim() const noexcept { return energies_.size(); }
  int n_sites() const noexcept { return n_sites_; }

  /// Ascending.
  const Eigen::VectorXd& energies() const noexcept { return energies_; }
  /// e^{-beta E_n} / Z, aligned with energies().
  const Eigen::VectorXd& populations() const noexcept { return populations_; }
  bool diagonal_basis() const noexcept { return diagonal_; }
  /// Column n is the eigenvector of energies()[n]. Materialized on the fast path.
  Eigen::MatrixXd eigenvectors() const;
  /// For the fast path: basis state carrying energies()[n].
  const std::vector<Eigen::Index>& basis_order() const noexcept { return order_; }

  /// <b| e^{-beta H}/Z |b> for every z-basis state b.
  Eigen::VectorXd density_diagonal() const;

  Eigen::MatrixXd to_eigenbasis(const Eigen::VectorXd& diag_op) const;
  Eigen::MatrixXd to_eigenbasis(const Eigen::MatrixXd& op) const;

 private:
  int n_sites_ = 0;
  double beta_ = 0.0;
  double log_z_ = 0.0;
  bool diagonal_ = false;
  Eigen::VectorXd energies_;
  Eigen::VectorXd populations_;
  Eigen::MatrixXd vectors_;          // empty on the fast path
  std::vector<Eigen::Index> order_;  // fast path only
};

double gibbs_expectation(const SpectralGibbs& sg, const Eigen::VectorXd& diag_op);
double gibbs_expectation(const SpectralGibbs& sg, const Eigen::MatrixXd& op);

/// Weight matrix w(E_m, E_n) of the spectral Duhamel formula
///   (A, B) = sum_{m,n} A_mn B_nm w(E_m, E_n),
///   w = (e^{-beta E_n} - e^{-beta E_m}) / (beta Z (E_m - E_n)).
class DuhamelKernel {
 public:
  explicit DuhamelKernel(const SpectralGibbs& sg, double degenerate_threshold = kDegenerateGapThreshold);

  const Eigen::MatrixXd& weights() const noexcept { return w_; }
  /// Both operators already in the eigenbasis and symmetric.
  double operator()(const Eigen::MatrixXd& a_eig, const Eigen::MatrixXd& b_eig) const;

 private:
  Eigen::MatrixXd w_;
};

/// w for a pair of populations; exposed for tests.
double duhamel_weight(double beta, double e_m, double e_n, double p_m, double p_n,
                      double degenerate_threshold = kDegenerateGapThreshold);

double duhamel(const SpectralGibbs& sg, const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double duhamel(const SpectralGibbs& sg, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double truncated_duhamel(const SpectralGibbs& sg, const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double truncated_duhamel(const SpectralGibbs& sg, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// psi_L = log Z / |Lambda_L|.
struct PressureValue {
  double psi = 0.0;
};

PressureValue pressure_density(const SpectralGibbs& sg, const Lattice& lat);

}  // namespace nmgauge
