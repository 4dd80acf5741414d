#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nmgauge {

using Site = int;
/// Sorted list of distinct sites.
using SiteSet = std::vector<Site>;
/// Bit i set <=> site i in the set. Basis states use the same encoding.
using BasisMask = std::uint64_t;

BasisMask site_mask(std::span<const Site> sites);
SiteSet sites_of(BasisMask mask);

/// Hypercubic lattice [0, L-1]^d. Site index = sum_k x_k L^k.
class Lattice {
 public:
  Lattice(int side, int dim, int max_sites);

  int side() const noexcept { return side_; }
  int dim() const noexcept { return dim_; }
  int volume() const noexcept { return volume_; }

  std::vector<int> coordinates(Site s) const;
  Site site(std::span<const int> coords) const;

 private:
  int side_;
  int dim_;
  int volume_;
};

/// Throws BudgetError if L^d > max_sites and std::invalid_argument for L, d < 1.
Lattice build_lattice(int side, int dim, int max_sites);

enum class Boundary { periodic, open };

/// One interaction range A_p: p offsets, one of them the origin.
struct InteractionShape {
  int p = 0;
  std::vector<std::vector<int>> offsets;

  void validate(int dim) const;
};

/// B_p: translates of one or more shapes, as a set of p-site subsets in
/// lexicographic order.
struct BondFamily {
  int p = 0;
  Boundary boundary = Boundary::periodic;
  std::vector<SiteSet> bonds;

  std::size_t size() const noexcept { return bonds.size(); }
};

BondFamily enumerate_bonds(const Lattice& lat, const InteractionShape& shape,
                           Boundary boundary = Boundary::periodic);
BondFamily enumerate_bonds(const Lattice& lat, std::span<const InteractionShape> shapes,
                           Boundary boundary = Boundary::periodic);

/// Single-site family (p = 1, shape {0}); its order operator is the magnetization o_1.
BondFamily field_family(const Lattice& lat);

}  // namespace nmgauge
