#include "nmgauge/operators.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace nmgauge {

const char* to_string(AverageMethod m) noexcept {
  switch (m) {
    case AverageMethod::mc: return "mc";
    case AverageMethod::quadrature: return "quadrature";
    case AverageMethod::enumeration: return "enumeration";
  }
  return "?";
}

namespace {

void check_sites(int n_sites) {
  if (n_sites < 0 || n_sites > 30) throw std::invalid_argument("unsupported spin count " + std::to_string(n_sites));
}

}  // namespace

Eigen::VectorXd z_product_diagonal(int n_sites, BasisMask mask) {
  check_sites(n_sites);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  if ((mask >> n_sites) != 0) throw std::out_of_range("z-product touches a site outside the lattice");
  Eigen::VectorXd d(dim);
  for (Eigen::Index b = 0; b < dim; ++b)
    d[b] = (std::popcount(static_cast<BasisMask>(b) & mask) & 1) ? -1.0 : 1.0;
  return d;
}

ZProductOperator z_product(int n_sites, const SiteSet& sites) {
  for (Site s : sites)
    if (s < 0 || s >= n_sites) throw std::out_of_range("site " + std::to_string(s) + " not in lattice");
  return {sites, z_product_diagonal(n_sites, site_mask(sites))};
}

Eigen::MatrixXd transverse_term(int n_sites) {
  check_sites(n_sites);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b)
    for (int i = 0; i < n_sites; ++i) m(b, b ^ (Eigen::Index{1} << i)) = 1.0;
  return m;
}

Eigen::VectorXd family_field(int n_sites, const BondFamily& family, std::span<const double> couplings) {
  if (couplings.size() != family.size())
    throw std::invalid_argument("missing coupling: family p=" + std::to_string(family.p) + " has " +
                                std::to_string(family.size()) + " bonds but " +
                                std::to_string(couplings.size()) + " couplings");
  check_sites(n_sites);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dim);
  for (std::size_t k = 0; k < family.size(); ++k) {
    const double J = couplings[k];
    if (J == 0.0) continue;
    const BasisMask m = site_mask(family.bonds[k]);
    if ((m >> n_sites) != 0) throw std::out_of_range("bond outside lattice");
    for (Eigen::Index b = 0; b < dim; ++b)
      f[b] += (std::popcount(static_cast<BasisMask>(b) & m) & 1) ? -J : J;
  }
  return f;
}

Eigen::VectorXd order_operator(int n_sites, const BondFamily& family) {
  if (family.size() == 0) throw std::invalid_argument("order operator of an empty family");
  const std::vector<double> ones(family.size(), 1.0);
  return family_field(n_sites, family, ones) / static_cast<double>(family.size());
}

Eigen::MatrixXd HamiltonianMatrix::dense() const {
  Eigen::MatrixXd m = h == 0.0 ? Eigen::MatrixXd::Zero(dim(), dim()) : Eigen::MatrixXd(-h * transverse_term(n_sites));
  m.diagonal() += classical_diagonal;
  return m;
}

HamiltonianMatrix assemble_hamiltonian(int n_sites, std::span<const BondFamily> families,
                                       const CouplingSample& couplings, double h) {
  if (couplings.by_family.size() != families.size())
    throw std::invalid_argument("missing coupling: sample has " + std::to_string(couplings.by_family.size()) +
                                " families, model has " + std::to_string(families.size()));
  HamiltonianMatrix H;
  H.n_sites = n_sites;
  H.h = h;
  H.classical_diagonal = Eigen::VectorXd::Zero(Eigen::Index{1} << n_sites);
  for (std::size_t f = 0; f < families.size(); ++f)
    H.classical_diagonal -= family_field(n_sites, families[f], couplings.by_family[f]);
  return H;
}

}  // namespace nmgauge
