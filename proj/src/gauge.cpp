#include "nmgauge/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nmgauge/errors.hpp"

namespace nmgauge {

int GaugeConfig::product(const SiteSet& X) const {
  int s = 1;
  for (Site i : X) s *= tau.at(static_cast<std::size_t>(i));
  return s;
}

BasisMask GaugeConfig::flip_mask() const {
  BasisMask m = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] != 1 && tau[i] != -1) throw std::invalid_argument("gauge entries must be +1 or -1");
    if (tau[i] == -1) m |= BasisMask{1} << i;
  }
  return m;
}

GaugeConfig random_gauge(int n_sites, std::uint64_t seed, std::size_t index) {
  // Separate stream tag so gauge draws never alias coupling draws.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x6761u};
  std::mt19937_64 engine(seq);
  std::bernoulli_distribution coin(0.5);
  GaugeConfig g;
  g.tau.resize(static_cast<std::size_t>(n_sites));
  for (int& t : g.tau) t = coin(engine) ? -1 : 1;
  return g;
}

GaugeUnitary gauge_unitary(const GaugeConfig& tau) { return {tau.flip_mask()}; }

Eigen::MatrixXd conjugate(const Eigen::MatrixXd& m, const GaugeUnitary& u) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index b = 0; b < m.cols(); ++b)
    for (Eigen::Index a = 0; a < m.rows(); ++a) out(a, b) = m(u.apply(a), u.apply(b));
  return out;
}

Eigen::VectorXd conjugate(const Eigen::VectorXd& diag, const GaugeUnitary& u) {
  Eigen::VectorXd out(diag.size());
  for (Eigen::Index a = 0; a < diag.size(); ++a) out[a] = diag[u.apply(a)];
  return out;
}

CouplingSample gauge_transform_couplings(std::span<const BondFamily> families, const CouplingSample& J,
                                         const GaugeConfig& tau) {
  if (J.by_family.size() != families.size()) throw std::invalid_argument("coupling/family count mismatch");
  CouplingSample out = J;
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (out.by_family[f].size() != families[f].size()) throw std::invalid_argument("coupling/bond count mismatch");
    for (std::size_t k = 0; k < families[f].size(); ++k)
      if (tau.product(families[f].bonds[k]) < 0) out.by_family[f][k] = -out.by_family[f][k];
  }
  return out;
}

InvarianceResidual check_hamiltonian_invariance(int n_sites, std::span<const BondFamily> families,
                                                const CouplingSample& J, const GaugeConfig& tau, double h,
                                                double beta) {
  const auto Jt = gauge_transform_couplings(families, J, tau);
  const auto H = assemble_hamiltonian(n_sites, families, J, h);
  const auto Ht = assemble_hamiltonian(n_sites, families, Jt, h);
  const auto U = gauge_unitary(tau);

  InvarianceResidual r;
  const Eigen::MatrixXd diff = Ht.dense() - conjugate(H.dense(), U);
  r.matrix = diff.cwiseAbs().maxCoeff();

  const SpectralGibbs sg(H, beta);
  const SpectralGibbs sgt(Ht, beta);
  const double scale = std::max(1.0, sg.energies().cwiseAbs().maxCoeff());
  r.spectrum = (sg.energies() - sgt.energies()).cwiseAbs().maxCoeff() / scale;
  r.log_z = std::abs(sg.log_z() - sgt.log_z()) / std::max(1.0, std::abs(sg.log_z()));

  std::vector<SiteSet> targets;
  for (const auto& fam : families) targets.insert(targets.end(), fam.bonds.begin(), fam.bonds.end());

  std::vector<Eigen::VectorXd> ops;
  for (const auto& X : targets) ops.push_back(z_product_diagonal(n_sites, site_mask(X)));

  const Eigen::VectorXd rho = sg.density_diagonal();
  const Eigen::VectorXd rho_t = sgt.density_diagonal();
  for (std::size_t a = 0; a < targets.size(); ++a) {
    const double lhs = rho_t.dot(ops[a]);
    const double rhs = tau.product(targets[a]) * rho.dot(ops[a]);
    r.one_point = std::max(r.one_point, std::abs(lhs - rhs));
  }

  if (sg.diagonal_basis() != sgt.diagonal_basis()) throw std::logic_error("inconsistent spectral paths");
  std::vector<Eigen::MatrixXd> eig, eig_t;
  if (!sg.diagonal_basis()) {
    for (const auto& op : ops) {
      eig.push_back(sg.to_eigenbasis(op));
      eig_t.push_back(sgt.to_eigenbasis(op));
    }
  }
  const DuhamelKernel k(sg), kt(sgt);
  for (std::size_t a = 0; a < targets.size(); ++a) {
    for (std::size_t b = a; b < targets.size(); ++b) {
      double lhs = 0.0, rhs = 0.0;
      if (sg.diagonal_basis()) {
        lhs = (rho_t.array() * ops[a].array() * ops[b].array()).sum();
        rhs = (rho.array() * ops[a].array() * ops[b].array()).sum();
      } else {
        lhs = kt(eig_t[a], eig_t[b]);
        rhs = k(eig[a], eig[b]);
      }
      rhs *= tau.product(targets[a]) * tau.product(targets[b]);
      r.duhamel = std::max(r.duhamel, std::abs(lhs - rhs));
    }
  }
  return r;
}

double covariance_factor(const GaussianEnsemble& ens, std::span<const BondFamily> families, const CouplingSample& J,
                         const GaugeConfig& tau) {
  if (J.by_family.size() != families.size()) throw std::invalid_argument("coupling/family count mismatch");
  double log_factor = 0.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& gp = ens.at(families[f].p);
    if (!(gp.delta > 0.0)) throw ConfigError("ensemble.delta", "covariance factor needs delta > 0");
    const double b = gp.mu / (gp.delta * gp.delta);
    for (std::size_t k = 0; k < families[f].size(); ++k) {
      const int tx = tau.product(families[f].bonds[k]);
      log_factor += b * J.by_family[f][k] * (tx - 1);
    }
  }
  return std::exp(log_factor);
}

}  // namespace nmgauge
