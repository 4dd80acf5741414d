#include "nmgauge/model.hpp"

#include <set>
#include <string>

#include "nmgauge/errors.hpp"

namespace nmgauge {

int Model::family_index(int p) const noexcept {
  for (std::size_t f = 0; f < families.size(); ++f)
    if (families[f].p == p) return static_cast<int>(f);
  return -1;
}

void Model::validate() const {
  std::set<int> seen;
  for (const auto& fam : families) {
    if (!seen.insert(fam.p).second)
      throw ConfigError("families", "order p=" + std::to_string(fam.p) + " declared twice; merge its shapes");
    std::visit([&](const auto& e) {
      if (!e.by_order.contains(fam.p))
        throw ConfigError("ensemble.p" + std::to_string(fam.p), "missing parameters for a declared family");
    }, ensemble);
  }
  if (n_sites() > limits.classical_spins)
    throw BudgetError("lattice has " + std::to_string(n_sites()) + " sites, classical enumeration cap is " +
                      std::to_string(limits.classical_spins));
}

Model with_uniform_field(const Model& model, double mu1) {
  Model out = model;
  if (out.family_index(1) < 0) out.families.push_back(field_family(out.lattice));
  out.ensemble = with_fixed_coupling(out.ensemble, 1, mu1);
  return out;
}

}  // namespace nmgauge
