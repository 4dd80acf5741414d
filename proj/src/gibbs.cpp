#include "nmgauge/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "nmgauge/errors.hpp"

namespace nmgauge {

namespace {

// Fills populations and log Z from ascending energies.
void boltzmann(const Eigen::VectorXd& energies, double beta, Eigen::VectorXd& populations, double& log_z) {
  const double e0 = energies[0];
  populations = (-beta * (energies.array() - e0)).exp().matrix();
  const double shifted_z = populations.sum();
  populations /= shifted_z;
  log_z = -beta * e0 + std::log(shifted_z);
}

void require_dim(const SpectralGibbs& sg, Eigen::Index rows, Eigen::Index cols) {
  if (rows != sg.dim() || cols != sg.dim())
    throw std::invalid_argument("operator dimension " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " does not match Hilbert space dimension " + std::to_string(sg.dim()));
}

}  // namespace

SpectralGibbs::SpectralGibbs(const HamiltonianMatrix& H, double beta) : SpectralGibbs(H, beta, Options{}) {}

SpectralGibbs::SpectralGibbs(const HamiltonianMatrix& H, double beta, Options opts)
    : n_sites_(H.n_sites), beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive and finite");
  if (H.n_sites > opts.max_spins)
    throw BudgetError("quantum engine limited to " + std::to_string(opts.max_spins) + " spins, got " +
                      std::to_string(H.n_sites));

  if (H.is_diagonal() && !opts.force_dense) {
    diagonal_ = true;
    const auto& d = H.classical_diagonal;
    order_.resize(d.size());
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    std::stable_sort(order_.begin(), order_.end(), [&](Eigen::Index a, Eigen::Index b) { return d[a] < d[b]; });
    energies_.resize(d.size());
    for (Eigen::Index n = 0; n < d.size(); ++n) energies_[n] = d[order_[n]];
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.dense());
    if (solver.info() != Eigen::Success)
      throw NumericalError("symmetric eigensolver did not converge (N=" + std::to_string(H.n_sites) + ")");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }
  boltzmann(energies_, beta_, populations_, log_z_);
}

Eigen::MatrixXd SpectralGibbs::eigenvectors() const {
  if (!diagonal_) return vectors_;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim(), dim());
  for (Eigen::Index n = 0; n < dim(); ++n) v(order_[n], n) = 1.0;
  return v;
}

Eigen::VectorXd SpectralGibbs::density_diagonal() const {
  if (diagonal_) {
    Eigen::VectorXd rho(dim());
    for (Eigen::Index n = 0; n < dim(); ++n) rho[order_[n]] = populations_[n];
    return rho;
  }
  return vectors_.array().square().matrix() * populations_;
}

Eigen::MatrixXd SpectralGibbs::to_eigenbasis(const Eigen::VectorXd& diag_op) const {
  require_dim(*this, diag_op.size(), diag_op.size());
  if (diagonal_) {
    Eigen::VectorXd permuted(dim());
    for (Eigen::Index n = 0; n < dim(); ++n) permuted[n] = diag_op[order_[n]];
    return permuted.asDiagonal();
  }
  return vectors_.transpose() * (diag_op.asDiagonal() * vectors_);
}

Eigen::MatrixXd SpectralGibbs::to_eigenbasis(const Eigen::MatrixXd& op) const {
  require_dim(*this, op.rows(), op.cols());
  const Eigen::MatrixXd v = eigenvectors();
  return v.transpose() * op * v;
}

double gibbs_expectation(const SpectralGibbs& sg, const Eigen::VectorXd& diag_op) {
  require_dim(sg, diag_op.size(), diag_op.size());
  return sg.density_diagonal().dot(diag_op);
}

double gibbs_expectation(const SpectralGibbs& sg, const Eigen::MatrixXd& op) {
  const Eigen::MatrixXd a = sg.to_eigenbasis(op);
  return a.diagonal().dot(sg.populations());
}

double duhamel_weight(double beta, double e_m, double e_n, double p_m, double p_n, double degenerate_threshold) {
  const double x = beta * std::abs(e_m - e_n);
  if (x < degenerate_threshold) return 0.5 * (p_m + p_n);
  const double p_low = e_m < e_n ? p_m : p_n;
  return p_low * (-std::expm1(-x)) / x;
}

DuhamelKernel::DuhamelKernel(const SpectralGibbs& sg, double degenerate_threshold) {
  const auto& e = sg.energies();
  const auto& p = sg.populations();
  const Eigen::Index D = sg.dim();
  w_.resize(D, D);
  for (Eigen::Index n = 0; n < D; ++n) {
    w_(n, n) = p[n];
    for (Eigen::Index m = 0; m < n; ++m) {
      const double w = duhamel_weight(sg.beta(), e[m], e[n], p[m], p[n], degenerate_threshold);
      w_(m, n) = w;
      w_(n, m) = w;
    }
  }
}

double DuhamelKernel::operator()(const Eigen::MatrixXd& a_eig, const Eigen::MatrixXd& b_eig) const {
  if (a_eig.rows() != w_.rows() || b_eig.rows() != w_.rows())
    throw std::invalid_argument("operator dimension does not match Duhamel kernel");
  return (a_eig.array() * b_eig.array() * w_.array()).sum();
}

double duhamel(const SpectralGibbs& sg, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  require_dim(sg, a.size(), b.size());
  if (sg.diagonal_basis()) {
    // Diagonal observables commute with a diagonal H: the Duhamel function is
    // the plain correlation.
    return (sg.density_diagonal().array() * a.array() * b.array()).sum();
  }
  return DuhamelKernel(sg)(sg.to_eigenbasis(a), sg.to_eigenbasis(b));
}

double duhamel(const SpectralGibbs& sg, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return DuhamelKernel(sg)(sg.to_eigenbasis(a), sg.to_eigenbasis(b));
}

double truncated_duhamel(const SpectralGibbs& sg, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return duhamel(sg, a, b) - gibbs_expectation(sg, a) * gibbs_expectation(sg, b);
}

double truncated_duhamel(const SpectralGibbs& sg, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return duhamel(sg, a, b) - gibbs_expectation(sg, a) * gibbs_expectation(sg, b);
}

PressureValue pressure_density(const SpectralGibbs& sg, const Lattice& lat) {
  return {sg.log_z() / static_cast<double>(lat.volume())};
}

}  // namespace nmgauge
