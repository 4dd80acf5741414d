#include "nmgauge/disorder.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "nmgauge/errors.hpp"

namespace nmgauge {

namespace {

std::string order_key(int p) { return "ensemble.p" + std::to_string(p); }

}  // namespace

const GaussianParams& GaussianEnsemble::at(int p) const {
  auto it = by_order.find(p);
  if (it == by_order.end()) throw ConfigError(order_key(p), "no Gaussian parameters for this order");
  return it->second;
}

const BinomialParams& BinomialEnsemble::at(int p) const {
  auto it = by_order.find(p);
  if (it == by_order.end()) throw ConfigError(order_key(p), "no binomial parameters for this order");
  return it->second;
}

bool is_random(const Ensemble& ens, int p) {
  if (const auto* g = std::get_if<GaussianEnsemble>(&ens)) return g->at(p).delta > 0.0;
  const auto& b = std::get<BinomialEnsemble>(ens).at(p);
  return b.mu != 0.0 && b.r > 0.0 && b.r < 1.0;
}

double deterministic_coupling(const Ensemble& ens, int p) {
  if (const auto* g = std::get_if<GaussianEnsemble>(&ens)) return g->at(p).mu;
  const auto& b = std::get<BinomialEnsemble>(ens).at(p);
  if (b.mu == 0.0 || b.r >= 1.0) return b.mu;
  if (b.r <= 0.0) return -b.mu;
  throw std::logic_error("deterministic_coupling on a random binomial family");
}

Ensemble with_fixed_coupling(const Ensemble& ens, int p, double value) {
  if (const auto* g = std::get_if<GaussianEnsemble>(&ens)) {
    GaussianEnsemble out = *g;
    out.by_order[p] = {value, 0.0};
    return out;
  }
  BinomialEnsemble out = std::get<BinomialEnsemble>(ens);
  out.by_order[p] = {value, 1.0};
  return out;
}

double binomial_k(double r) {
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("r", "K(r) requires 0 < r < 1, got " + std::to_string(r));
  return 0.5 * std::log(r / (1.0 - r));
}

double nishimori_beta(const Ensemble& ens, int p) {
  if (const auto* g = std::get_if<GaussianEnsemble>(&ens)) {
    const auto& gp = g->at(p);
    if (!(gp.delta > 0.0))
      throw ConfigError(order_key(p) + ".delta", "Nishimori manifold undefined for delta = 0");
    return gp.mu / (gp.delta * gp.delta);
  }
  const auto& bp = std::get<BinomialEnsemble>(ens).at(p);
  if (!(bp.r > 0.0 && bp.r < 1.0))
    throw ConfigError(order_key(p) + ".r", "Nishimori manifold undefined for r in {0, 1}");
  if (!(bp.mu > 0.0)) throw ConfigError(order_key(p) + ".mu", "binomial magnitude must be positive");
  return binomial_k(bp.r) / bp.mu;
}

NishimoriPoint nishimori_point(const Ensemble& ens) {
  NishimoriPoint nm;
  std::visit([&](const auto& e) {
    for (const auto& [p, params] : e.by_order) nm.beta_by_order[p] = nishimori_beta(ens, p);
  }, ens);
  return nm;
}

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  GaussHermiteRule rule;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }
  // Golub-Welsch: Jacobi matrix of the Hermite recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("Gauss-Hermite eigensolve failed");
  rule.nodes.resize(order);
  rule.weights.resize(order);
  double total = 0.0;
  for (int k = 0; k < order; ++k) {
    rule.nodes[k] = solver.eigenvalues()[k];
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = v0 * v0;
    total += rule.weights[k];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

std::vector<WeightedSample> quadrature_grid(const GaussianEnsemble& ens, std::span<const BondFamily> families,
                                            int order, const DisorderLimits& limits) {
  SourceSpec spec;
  spec.method = AverageMethod::quadrature;
  spec.quadrature_order = order;
  spec.limits = limits;
  DisorderSource src(ens, families, spec);
  std::vector<WeightedSample> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out.push_back(src.realization(i));
  return out;
}

std::vector<WeightedSample> enumerate_binomial(const BinomialEnsemble& ens, std::span<const BondFamily> families,
                                               const DisorderLimits& limits) {
  SourceSpec spec;
  spec.method = AverageMethod::enumeration;
  spec.limits = limits;
  DisorderSource src(ens, families, spec);
  std::vector<WeightedSample> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out.push_back(src.realization(i));
  return out;
}

double jackknife_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("jackknife needs at least two samples");
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  const double nm1 = static_cast<double>(n - 1);
  double mean_loo = 0.0;
  for (double x : values) mean_loo += (sum - x) / nm1;
  mean_loo /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : values) {
    const double d = (sum - x) / nm1 - mean_loo;
    ss += d * d;
  }
  return std::sqrt(nm1 / static_cast<double>(n) * ss);
}

DisorderAverage disorder_average(std::span<const double> values, std::span<const double> weights,
                                 AverageMethod method) {
  if (values.empty()) throw std::invalid_argument("disorder average of an empty set");
  DisorderAverage avg;
  avg.method = method;
  avg.n = values.size();
  if (method == AverageMethod::mc) {
    avg.estimate = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    avg.error = jackknife_error(values);
    return avg;
  }
  if (weights.size() != values.size()) throw std::invalid_argument("weights and values differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  avg.estimate = s;
  avg.error = 0.0;
  return avg;
}

double gaussian_density(const GaussianParams& g, double J) {
  if (!(g.delta > 0.0)) throw std::invalid_argument("density needs delta > 0");
  const double z = (J - g.mu) / g.delta;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi * g.delta * g.delta);
}

}  // namespace nmgauge
