#pragma once

#include <Eigen/Dense>
#include <span>

#include "nmgauge/couplings.hpp"
#include "nmgauge/lattice.hpp"

namespace nmgauge {

/// Diagonal of sigma^z_X in the z basis: entry b is prod_{i in X} (1 - 2 bit_i(b)).
Eigen::VectorXd z_product_diagonal(int n_sites, BasisMask mask);

struct ZProductOperator {
  SiteSet sites;
  Eigen::VectorXd diag;
};

ZProductOperator z_product(int n_sites, const SiteSet& sites);

/// sum_i sigma^x_i: 1 between basis states at Hamming distance one.
Eigen::MatrixXd transverse_term(int n_sites);

/// sum_{X in B} J_X sigma^z_X as a diagonal.
Eigen::VectorXd family_field(int n_sites, const BondFamily& family, std::span<const double> couplings);

/// o_p = |B_p|^{-1} sum_{X in B_p} sigma^z_X.
Eigen::VectorXd order_operator(int n_sites, const BondFamily& family);

/// H = -sum_p sum_X J_X^p sigma^z_X - h sum_i sigma^x_i.
///
/// The z-coupling part is kept as a diagonal vector; the dense matrix is
/// only built on request. H is real symmetric in the z basis, so sigma^y
/// never appears.
struct HamiltonianMatrix {
  int n_sites = 0;
  double h = 0.0;
  Eigen::VectorXd classical_diagonal;

  Eigen::Index dim() const noexcept { return classical_diagonal.size(); }
  bool is_diagonal() const noexcept { return h == 0.0; }
  Eigen::MatrixXd dense() const;
};

HamiltonianMatrix assemble_hamiltonian(int n_sites, std::span<const BondFamily> families,
                                       const CouplingSample& couplings, double h);

/// Spin count at which dense 2^N matrices are refused.
inline constexpr int kDefaultQuantumSpinCap = 14;

}  // namespace nmgauge
