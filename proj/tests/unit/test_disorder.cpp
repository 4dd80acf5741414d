#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "nmgauge/disorder.hpp"
#include "nmgauge/errors.hpp"

using namespace nmgauge;

namespace {

std::vector<BondFamily> chain_families(int L) {
  Lattice lat(L, 1, 20);
  return {field_family(lat), enumerate_bonds(lat, InteractionShape{2, {{0}, {1}}})};
}

// E[(mu + delta Z)^k] for Z ~ N(0, 1), via the binomial expansion and
// E[Z^{2m}] = (2m - 1)!!.
double normal_moment(double mu, double delta, int k) {
  double sum = 0.0;
  for (int j = 0; j <= k; j += 2) {
    double dfact = 1.0;
    for (int i = j - 1; i > 0; i -= 2) dfact *= i;
    sum += std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(k - j + 1.0)) * std::pow(delta, j) *
           std::pow(mu, k - j) * dfact;
  }
  return sum;
}

}  // namespace

TEST(GaussHermite, PolynomialExactness) {
  for (int order : {1, 2, 5, 10, 20}) {
    const auto rule = gauss_hermite(order);
    ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(order));
    EXPECT_NEAR(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0), 1.0, 1e-14);
    // Exact for polynomials of degree <= 2 order - 1.
    for (int k = 0; k <= 2 * order - 1 && k <= 24; ++k) {
      double q = 0.0;
      for (int i = 0; i < order; ++i) q += rule.weights[i] * std::pow(std::sqrt(2.0) * 0.8 * rule.nodes[i] + 0.3, k);
      const double ref = normal_moment(0.3, 0.8, k);
      EXPECT_NEAR(q, ref, 1e-12 * std::max(1.0, std::abs(ref))) << "order " << order << " k " << k;
    }
  }
  EXPECT_EQ(gauss_hermite(1).nodes[0], 0.0);
  EXPECT_THROW(gauss_hermite(0), std::invalid_argument);
}

TEST(GaussHermite, SmoothExpectation) {
  // E[exp(a J)] = exp(a mu + a^2 delta^2 / 2).
  GaussianEnsemble g;
  g.by_order[1] = {0.2, 0.9};
  Lattice lat(1, 1, 20);
  const std::vector<BondFamily> fams = {field_family(lat)};
  const auto grid = quadrature_grid(g, fams, 20);
  double q = 0.0;
  for (const auto& s : grid) q += s.weight * std::exp(0.7 * s.couplings.by_family[0][0]);
  EXPECT_NEAR(q, std::exp(0.7 * 0.2 + 0.49 * 0.81 / 2), 1e-13);
}

TEST(Disorder, NishimoriBeta) {
  GaussianEnsemble g;
  g.by_order[2] = {0.6, 2.0};
  EXPECT_DOUBLE_EQ(nishimori_beta(g, 2), 0.15);
  BinomialEnsemble b;
  b.by_order[2] = {1.0, 0.9};
  EXPECT_DOUBLE_EQ(nishimori_beta(b, 2), 0.5 * std::log(9.0));
  b.by_order[3] = {2.0, 0.9};
  EXPECT_DOUBLE_EQ(nishimori_beta(b, 3), 0.25 * std::log(9.0));
  g.by_order[1] = {0.5, 0.0};
  EXPECT_THROW(nishimori_beta(g, 1), ConfigError);
  b.by_order[1] = {1.0, 1.0};
  EXPECT_THROW(nishimori_beta(b, 1), ConfigError);
  EXPECT_THROW(nishimori_beta(b, 7), ConfigError);
}

TEST(Disorder, McSamplesAreIndexed) {
  GaussianEnsemble g;
  g.by_order[1] = {0.1, 1.0};
  g.by_order[2] = {0.3, 0.5};
  const auto fams = chain_families(4);
  const auto a = sample_couplings(g, fams, 42, 17);
  const auto b = sample_couplings(g, fams, 42, 17);
  const auto c = sample_couplings(g, fams, 42, 18);
  EXPECT_EQ(a.by_family, b.by_family);
  EXPECT_NE(a.by_family, c.by_family);
  EXPECT_EQ(a.provenance.index, 17u);
}

TEST(Disorder, CommonRandomNumbersAcrossFamilies) {
  GaussianEnsemble g;
  g.by_order[1] = {0.1, 1.0};
  g.by_order[2] = {0.3, 0.5};
  const auto fams = chain_families(4);
  const auto before = sample_couplings(g, fams, 9, 3);
  const auto pinned = std::get<GaussianEnsemble>(with_fixed_coupling(g, 1, 0.0));
  const auto after = sample_couplings(pinned, fams, 9, 3);
  EXPECT_EQ(before.by_family[1], after.by_family[1]);
  for (double j : after.by_family[0]) EXPECT_EQ(j, 0.0);
}

TEST(Disorder, McMomentsConverge) {
  GaussianEnsemble g;
  g.by_order[1] = {0.4, 1.5};
  Lattice lat(1, 1, 20);
  const std::vector<BondFamily> fams = {field_family(lat)};
  SourceSpec spec;
  spec.method = AverageMethod::mc;
  spec.mc_samples = 20000;
  spec.seed = 5;
  const DisorderSource src(g, fams, spec);
  std::vector<double> v(src.size()), w(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto s = src.realization(i);
    v[i] = s.couplings.by_family[0][0];
    w[i] = s.weight;
  }
  const auto avg = disorder_average(v, w, AverageMethod::mc);
  EXPECT_NEAR(avg.error, 1.5 / std::sqrt(20000.0), 0.05 * 1.5 / std::sqrt(20000.0));
  EXPECT_LT(std::abs(avg.estimate - 0.4), 4.0 * avg.error);
}

TEST(Disorder, EnumerationWeights) {
  BinomialEnsemble b;
  b.by_order[1] = {1.0, 0.7};
  b.by_order[2] = {1.0, 1.0};  // ferromagnetic, deterministic
  const auto fams = chain_families(3);
  const auto all = enumerate_binomial(b, fams);
  ASSERT_EQ(all.size(), 8u);
  double total = 0.0, mean = 0.0;
  for (const auto& s : all) {
    total += s.weight;
    mean += s.weight * s.couplings.by_family[0][1];
    for (double j : s.couplings.by_family[1]) EXPECT_EQ(j, 1.0);
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(mean, 0.7 - 0.3, 1e-15);
}

TEST(Disorder, MethodAndBudgetGuards) {
  GaussianEnsemble g;
  g.by_order[1] = {0.0, 1.0};
  g.by_order[2] = {0.0, 1.0};
  BinomialEnsemble b;
  b.by_order[1] = {1.0, 0.6};
  b.by_order[2] = {1.0, 0.6};
  const auto fams = chain_families(4);
  SourceSpec q;
  q.method = AverageMethod::quadrature;
  EXPECT_THROW(DisorderSource(b, fams, q), ConfigError);
  EXPECT_THROW(DisorderSource(g, fams, q), BudgetError);  // 20^8 nodes
  q.quadrature_order = 5;
  EXPECT_EQ(DisorderSource(g, fams, q).size(), 390625u);
  SourceSpec e;
  e.method = AverageMethod::enumeration;
  EXPECT_THROW(DisorderSource(g, fams, e), ConfigError);
  e.limits.enumeration_bonds = 7;
  EXPECT_THROW(DisorderSource(b, fams, e), BudgetError);
  SourceSpec m;
  m.method = AverageMethod::mc;
  m.mc_samples = 1;
  EXPECT_THROW(DisorderSource(g, fams, m), ConfigError);
}

TEST(Jackknife, MeanMatchesClassicalStandardError) {
  // For the sample mean the delete-one jackknife reduces to s / sqrt(n).
  const std::vector<double> v = {1.0, 4.0, -2.0, 3.5, 0.25, 7.0, -1.0};
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(jackknife_error(v), std::sqrt(ss / (n - 1.0) / n), 1e-14);
  EXPECT_THROW(jackknife_error(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Jackknife, ScalesAsInverseSqrtN) {
  std::vector<double> small, large;
  for (int i = 0; i < 100; ++i) small.push_back(i % 2 ? 1.0 : -1.0);
  for (int i = 0; i < 400; ++i) large.push_back(i % 2 ? 1.0 : -1.0);
  EXPECT_NEAR(jackknife_error(small) / jackknife_error(large), std::sqrt(399.0 / 99.0), 1e-12);
}

TEST(Disorder, ExactAveragesIgnoreErrorBars) {
  const std::vector<double> v = {1.0, 3.0}, w = {0.25, 0.75};
  const auto a = disorder_average(v, w, AverageMethod::enumeration);
  EXPECT_DOUBLE_EQ(a.estimate, 2.5);
  EXPECT_EQ(a.error, 0.0);
}
