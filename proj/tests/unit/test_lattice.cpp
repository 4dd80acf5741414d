#include <gtest/gtest.h>

#include "nmgauge/errors.hpp"
#include "nmgauge/lattice.hpp"

using namespace nmgauge;

TEST(Lattice, CoordinatesRoundTrip) {
  Lattice lat(3, 2, 20);
  EXPECT_EQ(lat.volume(), 9);
  for (int s = 0; s < lat.volume(); ++s) EXPECT_EQ(lat.site(lat.coordinates(s)), s);
  EXPECT_EQ(lat.site(std::vector<int>{1, 2}), 1 + 2 * 3);
}

TEST(Lattice, BudgetGuard) {
  EXPECT_THROW(Lattice(5, 2, 20), BudgetError);
  EXPECT_THROW(build_lattice(0, 1, 20), std::invalid_argument);
}

TEST(Lattice, MasksAndSites) {
  const SiteSet s{0, 3, 5};
  EXPECT_EQ(site_mask(s), BasisMask{0b101001});
  EXPECT_EQ(sites_of(0b101001), s);
}

TEST(Bonds, PeriodicAndOpenChain) {
  Lattice lat(4, 1, 20);
  const InteractionShape nn{2, {{0}, {1}}};
  const auto per = enumerate_bonds(lat, nn, Boundary::periodic);
  const auto open = enumerate_bonds(lat, nn, Boundary::open);
  EXPECT_EQ(per.size(), 4u);
  EXPECT_EQ(open.size(), 3u);
  EXPECT_EQ(per.bonds.front(), (SiteSet{0, 1}));
  EXPECT_EQ(per.bonds.back(), (SiteSet{2, 3}));
  for (std::size_t k = 1; k < per.size(); ++k) EXPECT_LT(per.bonds[k - 1], per.bonds[k]);
}

TEST(Bonds, SquarePlaquettes) {
  Lattice lat(3, 2, 20);
  const InteractionShape plaq{4, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
  EXPECT_EQ(enumerate_bonds(lat, plaq, Boundary::periodic).size(), 9u);
  EXPECT_EQ(enumerate_bonds(lat, plaq, Boundary::open).size(), 4u);
}

TEST(Bonds, UnionOfShapesDropsDuplicates) {
  Lattice lat(3, 2, 20);
  const std::vector<InteractionShape> shapes = {{2, {{0, 0}, {1, 0}}}, {2, {{0, 0}, {0, 1}}}, {2, {{0, 0}, {-1, 0}}}};
  EXPECT_EQ(enumerate_bonds(lat, shapes, Boundary::periodic).size(), 18u);
}

TEST(Bonds, RejectsBadShapes) {
  Lattice lat(4, 1, 20);
  EXPECT_THROW(enumerate_bonds(lat, InteractionShape{2, {{1}, {2}}}), ConfigError);
  EXPECT_THROW(enumerate_bonds(lat, InteractionShape{2, {{0}, {0}}}), ConfigError);
  EXPECT_THROW(enumerate_bonds(lat, InteractionShape{2, {{0}, {4}}}), ConfigError);
  Lattice tiny(1, 1, 20);
  EXPECT_THROW(enumerate_bonds(tiny, InteractionShape{2, {{0}, {5}}}, Boundary::open), ConfigError);
}

TEST(Bonds, FieldFamily) {
  Lattice lat(2, 2, 20);
  const auto f = field_family(lat);
  EXPECT_EQ(f.p, 1);
  ASSERT_EQ(f.size(), 4u);
  for (int s = 0; s < 4; ++s) EXPECT_EQ(f.bonds[s], SiteSet{s});
}
