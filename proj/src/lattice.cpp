#include "nmgauge/lattice.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "nmgauge/errors.hpp"

namespace nmgauge {

BasisMask site_mask(std::span<const Site> sites) {
  BasisMask m = 0;
  for (Site s : sites) {
    if (s < 0 || s >= 64) throw std::out_of_range("site index out of range: " + std::to_string(s));
    m |= BasisMask{1} << s;
  }
  return m;
}

SiteSet sites_of(BasisMask mask) {
  SiteSet out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

Lattice::Lattice(int side, int dim, int max_sites) : side_(side), dim_(dim), volume_(1) {
  if (side < 1 || dim < 1) throw std::invalid_argument("lattice needs L >= 1 and d >= 1");
  for (int k = 0; k < dim; ++k) {
    if (static_cast<long long>(volume_) * side > max_sites) {
      throw BudgetError("lattice L=" + std::to_string(side) + ", d=" + std::to_string(dim) +
                        " exceeds the site cap of " + std::to_string(max_sites));
    }
    volume_ *= side;
  }
}

std::vector<int> Lattice::coordinates(Site s) const {
  if (s < 0 || s >= volume_) throw std::out_of_range("site index out of range");
  std::vector<int> x(dim_);
  for (int k = 0; k < dim_; ++k) {
    x[k] = s % side_;
    s /= side_;
  }
  return x;
}

Site Lattice::site(std::span<const int> coords) const {
  if (static_cast<int>(coords.size()) != dim_) throw std::invalid_argument("coordinate rank mismatch");
  Site s = 0;
  for (int k = dim_ - 1; k >= 0; --k) {
    if (coords[k] < 0 || coords[k] >= side_) throw std::out_of_range("coordinate outside lattice");
    s = s * side_ + coords[k];
  }
  return s;
}

Lattice build_lattice(int side, int dim, int max_sites) { return Lattice(side, dim, max_sites); }

void InteractionShape::validate(int dim) const {
  if (p < 1) throw ConfigError("p", "interaction order must be positive");
  if (static_cast<int>(offsets.size()) != p)
    throw ConfigError("offsets", "shape for p=" + std::to_string(p) + " has " +
                                     std::to_string(offsets.size()) + " offsets");
  std::set<std::vector<int>> seen;
  bool has_origin = false;
  for (const auto& off : offsets) {
    if (static_cast<int>(off.size()) != dim)
      throw ConfigError("offsets", "offset rank does not match lattice dimension");
    if (!seen.insert(off).second) throw ConfigError("offsets", "duplicate offset in shape");
    has_origin = has_origin || std::all_of(off.begin(), off.end(), [](int v) { return v == 0; });
  }
  if (!has_origin) throw ConfigError("offsets", "shape must contain the origin");
}

namespace {

void add_translates(const Lattice& lat, const InteractionShape& shape, Boundary boundary,
                    std::set<SiteSet>& out) {
  shape.validate(lat.dim());
  const int L = lat.side();
  std::vector<int> y(lat.dim());
  for (Site i = 0; i < lat.volume(); ++i) {
    const auto x = lat.coordinates(i);
    SiteSet bond;
    bool inside = true;
    for (const auto& off : shape.offsets) {
      for (int k = 0; k < lat.dim(); ++k) {
        const int v = x[k] + off[k];
        if (boundary == Boundary::periodic) {
          y[k] = ((v % L) + L) % L;
        } else if (v < 0 || v >= L) {
          inside = false;
        } else {
          y[k] = v;
        }
      }
      if (!inside) break;
      bond.push_back(lat.site(y));
    }
    if (!inside) continue;
    std::sort(bond.begin(), bond.end());
    if (std::adjacent_find(bond.begin(), bond.end()) != bond.end()) {
      throw ConfigError("offsets", "shape for p=" + std::to_string(shape.p) +
                                       " wraps onto itself on a lattice of side " + std::to_string(L));
    }
    out.insert(std::move(bond));
  }
}

}  // namespace

BondFamily enumerate_bonds(const Lattice& lat, std::span<const InteractionShape> shapes,
                           Boundary boundary) {
  if (shapes.empty()) throw ConfigError("shapes", "bond family needs at least one shape");
  const int p = shapes.front().p;
  std::set<SiteSet> unique;
  for (const auto& s : shapes) {
    if (s.p != p) throw ConfigError("shapes", "all shapes of one family must share p");
    add_translates(lat, s, boundary, unique);
  }
  if (unique.empty())
    throw ConfigError("shapes", "no bonds fit the lattice for p=" + std::to_string(p) +
                                    " (open boundary, shape larger than lattice?)");
  BondFamily fam;
  fam.p = p;
  fam.boundary = boundary;
  fam.bonds.assign(unique.begin(), unique.end());
  return fam;
}

BondFamily enumerate_bonds(const Lattice& lat, const InteractionShape& shape, Boundary boundary) {
  return enumerate_bonds(lat, std::span<const InteractionShape>(&shape, 1), boundary);
}

BondFamily field_family(const Lattice& lat) {
  InteractionShape single{1, {std::vector<int>(lat.dim(), 0)}};
  return enumerate_bonds(lat, single, Boundary::periodic);
}

}  // namespace nmgauge
