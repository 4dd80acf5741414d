#include "nmgauge/disorder.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nmgauge/errors.hpp"

namespace nmgauge {

namespace {

std::mt19937_64 sample_engine(std::uint64_t seed, std::size_t index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

CouplingSample sample_couplings(const Ensemble& ens, std::span<const BondFamily> families,
                                std::uint64_t seed, std::size_t index) {
  auto engine = sample_engine(seed, index);
  CouplingSample out;
  out.provenance = {AverageMethod::mc, seed, index};
  out.by_family.resize(families.size());
  if (const auto* g = std::get_if<GaussianEnsemble>(&ens)) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t f = 0; f < families.size(); ++f) {
      const auto& gp = g->at(families[f].p);
      auto& J = out.by_family[f];
      J.resize(families[f].size());
      for (double& j : J) j = gp.delta * normal(engine) + gp.mu;
    }
  } else {
    const auto& b = std::get<BinomialEnsemble>(ens);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t f = 0; f < families.size(); ++f) {
      const auto& bp = b.at(families[f].p);
      auto& J = out.by_family[f];
      J.resize(families[f].size());
      for (double& j : J) j = uniform(engine) < bp.r ? bp.mu : -bp.mu;
    }
  }
  return out;
}

DisorderSource::DisorderSource(const Ensemble& ens, std::span<const BondFamily> families, const SourceSpec& spec)
    : ensemble_(ens), families_(families.begin(), families.end()), spec_(spec) {
  if (spec.method == AverageMethod::mc) {
    if (spec.mc_samples < 2) throw ConfigError("disorder.n", "Monte Carlo needs at least two samples");
    count_ = spec.mc_samples;
    return;
  }

  const bool gaussian = std::holds_alternative<GaussianEnsemble>(ens);
  if (spec.method == AverageMethod::quadrature && !gaussian)
    throw ConfigError("disorder.method", "quadrature requires a Gaussian ensemble");
  if (spec.method == AverageMethod::enumeration && gaussian)
    throw ConfigError("disorder.method", "enumeration requires a binomial ensemble");

  fixed_.resize(families_.size());
  for (std::size_t f = 0; f < families_.size(); ++f) {
    const int p = families_[f].p;
    const bool random = is_random(ens, p);
    fixed_[f].assign(families_[f].size(), random ? 0.0 : deterministic_coupling(ens, p));
    if (!random) continue;
    double a = 0.0, b = 0.0;
    if (gaussian) {
      a = std::get<GaussianEnsemble>(ens).at(p).mu;
      b = std::get<GaussianEnsemble>(ens).at(p).delta;
    } else {
      a = std::get<BinomialEnsemble>(ens).at(p).mu;
      b = std::get<BinomialEnsemble>(ens).at(p).r;
    }
    for (std::size_t k = 0; k < families_[f].size(); ++k) random_.push_back({f, k, a, b});
  }

  const auto nb = random_.size();
  if (spec.method == AverageMethod::enumeration) {
    if (static_cast<int>(nb) > spec.limits.enumeration_bonds)
      throw BudgetError("enumeration over " + std::to_string(nb) + " random bonds exceeds the cap of " +
                        std::to_string(spec.limits.enumeration_bonds) + "; shrink the lattice or use mc");
    count_ = std::size_t{1} << nb;
  } else {
    if (spec.quadrature_order < 1) throw ConfigError("disorder.order", "quadrature order must be >= 1");
    const double nodes = std::pow(static_cast<double>(spec.quadrature_order), static_cast<double>(nb));
    if (nodes > spec.limits.quadrature_nodes)
      throw BudgetError("quadrature grid of " + std::to_string(spec.quadrature_order) + "^" + std::to_string(nb) +
                        " nodes exceeds the cap of " + std::to_string(spec.limits.quadrature_nodes) +
                        "; lower the order or the bond count");
    rule_ = gauss_hermite(spec.quadrature_order);
    count_ = static_cast<std::size_t>(nodes + 0.5);
  }
}

WeightedSample DisorderSource::realization(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("disorder realization index out of range");
  WeightedSample ws;
  if (spec_.method == AverageMethod::mc) {
    ws.couplings = sample_couplings(ensemble_, families_, spec_.seed, i);
    ws.weight = 1.0 / static_cast<double>(count_);
    return ws;
  }
  ws.couplings.by_family = fixed_;
  ws.couplings.provenance = {spec_.method, spec_.seed, i};
  double weight = 1.0;
  if (spec_.method == AverageMethod::enumeration) {
    for (std::size_t k = 0; k < random_.size(); ++k) {
      const auto& rb = random_[k];
      const bool negative = (i >> k) & 1u;
      ws.couplings.by_family[rb.family][rb.bond] = negative ? -rb.a : rb.a;
      weight *= negative ? 1.0 - rb.b : rb.b;
    }
  } else {
    const std::size_t order = rule_.nodes.size();
    std::size_t rest = i;
    for (const auto& rb : random_) {
      const std::size_t digit = rest % order;
      rest /= order;
      ws.couplings.by_family[rb.family][rb.bond] = std::sqrt(2.0) * rb.b * rule_.nodes[digit] + rb.a;
      weight *= rule_.weights[digit];
    }
  }
  ws.weight = weight;
  return ws;
}

}  // namespace nmgauge
