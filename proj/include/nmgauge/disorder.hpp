#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "nmgauge/couplings.hpp"
#include "nmgauge/lattice.hpp"

namespace nmgauge {

struct GaussianParams {
  double mu = 0.0;
  double delta = 0.0;
};

struct BinomialParams {
  double mu = 1.0;  // J = +mu with probability r, -mu otherwise
  double r = 0.5;
};

/// Parameters keyed by interaction order p.
struct GaussianEnsemble {
  std::map<int, GaussianParams> by_order;
  const GaussianParams& at(int p) const;
};

struct BinomialEnsemble {
  std::map<int, BinomialParams> by_order;
  const BinomialParams& at(int p) const;
};

using Ensemble = std::variant<GaussianEnsemble, BinomialEnsemble>;

/// True when couplings of order p actually fluctuate.
bool is_random(const Ensemble& ens, int p);
/// The fixed coupling of a non-random family.
double deterministic_coupling(const Ensemble& ens, int p);
/// Same ensemble with order p pinned to the deterministic coupling `value`.
Ensemble with_fixed_coupling(const Ensemble& ens, int p, double value);

/// K(r) = 1/2 log(r / (1 - r)).
double binomial_k(double r);

/// Per-order inverse temperatures beta_p of the Nishimori manifold.
struct NishimoriPoint {
  std::map<int, double> beta_by_order;
};

/// beta_p = mu_p / delta_p^2 (Gaussian) or K(r_p) / mu_p (binomial; equals
/// K(r_p) for unit-magnitude couplings). Throws ConfigError where the
/// manifold is undefined (delta_p = 0, r_p in {0, 1}).
double nishimori_beta(const Ensemble& ens, int p);
NishimoriPoint nishimori_point(const Ensemble& ens);

/// Deterministic per-sample draw: sample `index` of stream `seed` is the same
/// regardless of which thread asks for it. Every bond consumes a variate even
/// when its family is non-random, so changing one family's parameters leaves
/// the other families' couplings untouched (common random numbers).
CouplingSample sample_couplings(const Ensemble& ens, std::span<const BondFamily> families,
                                std::uint64_t seed, std::size_t index);

/// Gauss-Hermite rule for the weight e^{-x^2}, weights normalized to sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int order);

struct WeightedSample {
  CouplingSample couplings;
  double weight = 0.0;
};

struct DisorderLimits {
  int enumeration_bonds = 16;
  double quadrature_nodes = 1e6;
};

struct SourceSpec {
  AverageMethod method = AverageMethod::enumeration;
  std::size_t mc_samples = 10000;
  int quadrature_order = 20;
  std::uint64_t seed = 0;
  DisorderLimits limits;
};

/// Random-access sequence of weighted coupling realizations. Realization i is
/// generated on demand, so any index can be evaluated on any thread.
class DisorderSource {
 public:
  DisorderSource(const Ensemble& ens, std::span<const BondFamily> families, const SourceSpec& spec);

  std::size_t size() const noexcept { return count_; }
  AverageMethod method() const noexcept { return spec_.method; }
  const SourceSpec& spec() const noexcept { return spec_; }
  WeightedSample realization(std::size_t i) const;

 private:
  struct RandomBond {
    std::size_t family;
    std::size_t bond;
    double a;  // Gaussian: mu; binomial: mu
    double b;  // Gaussian: delta; binomial: r
  };

  Ensemble ensemble_;
  std::vector<BondFamily> families_;
  SourceSpec spec_;
  std::vector<std::vector<double>> fixed_;  // deterministic couplings, random slots overwritten
  std::vector<RandomBond> random_;
  GaussHermiteRule rule_;
  std::size_t count_ = 0;
};

/// Tensor Gauss-Hermite grid, J = sqrt(2) delta x + mu per random bond.
std::vector<WeightedSample> quadrature_grid(const GaussianEnsemble& ens, std::span<const BondFamily> families,
                                            int order, const DisorderLimits& limits = {});
/// All 2^B sign configurations of the random bonds with product weights.
std::vector<WeightedSample> enumerate_binomial(const BinomialEnsemble& ens, std::span<const BondFamily> families,
                                               const DisorderLimits& limits = {});

struct DisorderAverage {
  double estimate = 0.0;
  double error = 0.0;  // jackknife standard error (mc); 0 for exact weighted sums
  AverageMethod method = AverageMethod::enumeration;
  std::size_t n = 0;
};

/// MC ignores `weights` (uniform) and reports the jackknife error; the exact
/// methods return the weighted sum with error 0.
DisorderAverage disorder_average(std::span<const double> values, std::span<const double> weights,
                                 AverageMethod method);

/// Delete-one jackknife standard error of the sample mean.
double jackknife_error(std::span<const double> values);

/// Normal density with mean mu and standard deviation delta.
double gaussian_density(const GaussianParams& g, double J);

}  // namespace nmgauge
