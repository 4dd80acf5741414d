#pragma once

// Brute-force references built from explicit Kronecker products, independent
// of the bit-manipulation code under test.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

namespace oracle {

inline Eigen::Matrix2d pauli_x() { return (Eigen::Matrix2d() << 0, 1, 1, 0).finished(); }
inline Eigen::Matrix2d pauli_z() { return (Eigen::Matrix2d() << 1, 0, 0, -1).finished(); }

// Site 0 is the least significant bit, so it is the last Kronecker factor.
inline Eigen::MatrixXd on_sites(int n, const std::vector<int>& sites, const Eigen::Matrix2d& op) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int s = n - 1; s >= 0; --s) {
    bool hit = false;
    for (int x : sites) hit = hit || x == s;
    const Eigen::Matrix2d f = hit ? op : Eigen::Matrix2d::Identity();
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

inline Eigen::MatrixXd z_string(int n, const std::vector<int>& sites) { return on_sites(n, sites, pauli_z()); }

inline Eigen::MatrixXd transverse(int n) {
  const int dim = 1 << n;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) t += on_sites(n, {i}, pauli_x());
  return t;
}

struct Term {
  std::vector<int> sites;
  double J;
};

inline Eigen::MatrixXd hamiltonian(int n, const std::vector<Term>& terms, double h) {
  Eigen::MatrixXd H = -h * transverse(n);
  for (const auto& t : terms) H -= t.J * z_string(n, t.sites);
  return H;
}

inline Eigen::MatrixXd gibbs_state(const Eigen::MatrixXd& H, double beta) {
  const Eigen::MatrixXd e = (-beta * H).exp();
  return e / e.trace();
}

// (A, B) = int_0^1 Tr(rho^{1-s} A rho^s B) ds by composite Simpson.
inline double duhamel(const Eigen::MatrixXd& H, double beta, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      int panels = 400) {
  const Eigen::MatrixXd e = (-beta * H).exp();
  const double Z = e.trace();
  double sum = 0.0;
  for (int k = 0; k <= panels; ++k) {
    const double s = static_cast<double>(k) / panels;
    const Eigen::MatrixXd left = (-(1.0 - s) * beta * H).exp();
    const Eigen::MatrixXd right = (-s * beta * H).exp();
    const double f = (left * A * right * B).trace() / Z;
    const double c = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += c * f;
  }
  return sum / (3.0 * panels);
}

}  // namespace oracle
