#include <gtest/gtest.h>

#include "nmgauge/operators.hpp"
#include "oracles.hpp"

using namespace nmgauge;

TEST(Operators, ZProductMatchesKronecker) {
  const int n = 4;
  for (BasisMask m = 0; m < 16; ++m) {
    const auto sites = sites_of(m);
    const Eigen::MatrixXd ref = oracle::z_string(n, std::vector<int>(sites.begin(), sites.end()));
    EXPECT_TRUE(ref.isDiagonal());
    EXPECT_EQ((ref.diagonal() - z_product_diagonal(n, m)).cwiseAbs().maxCoeff(), 0.0) << m;
  }
}

TEST(Operators, ZProductRangeCheck) {
  EXPECT_THROW(z_product(3, SiteSet{0, 3}), std::out_of_range);
  const auto op = z_product(3, SiteSet{0, 2});
  EXPECT_EQ(op.diag(0b101), 1.0);
  EXPECT_EQ(op.diag(0b001), -1.0);
}

TEST(Operators, TransverseMatchesKronecker) {
  for (int n = 1; n <= 4; ++n) EXPECT_EQ((transverse_term(n) - oracle::transverse(n)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Operators, HamiltonianMatchesKronecker) {
  Lattice lat(3, 1, 20);
  std::vector<BondFamily> fams = {field_family(lat), enumerate_bonds(lat, InteractionShape{2, {{0}, {1}}})};
  CouplingSample J;
  J.by_family = {{0.3, -0.7, 1.1}, {0.5, -1.3, 0.25}};
  const double h = 0.8;
  const auto H = assemble_hamiltonian(3, fams, J, h);
  std::vector<oracle::Term> terms;
  for (std::size_t f = 0; f < fams.size(); ++f)
    for (std::size_t k = 0; k < fams[f].size(); ++k)
      terms.push_back({std::vector<int>(fams[f].bonds[k].begin(), fams[f].bonds[k].end()), J.by_family[f][k]});
  const Eigen::MatrixXd ref = oracle::hamiltonian(3, terms, h);
  EXPECT_LT((H.dense() - ref).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_FALSE(H.is_diagonal());
}

TEST(Operators, FamilyFieldAndOrderOperator) {
  Lattice lat(4, 1, 20);
  const auto fam = enumerate_bonds(lat, InteractionShape{2, {{0}, {1}}});
  const std::vector<double> ones(fam.size(), 1.0);
  const Eigen::VectorXd f = family_field(4, fam, ones);
  const Eigen::VectorXd o = order_operator(4, fam);
  EXPECT_DOUBLE_EQ(f(0), 4.0);
  EXPECT_DOUBLE_EQ(o(0), 1.0);
  EXPECT_DOUBLE_EQ(o(0b0101), -1.0);  // every bond antiparallel
  const std::vector<double> wrong(3, 1.0);
  EXPECT_THROW(family_field(4, fam, wrong), std::invalid_argument);
}
