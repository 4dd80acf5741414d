#pragma once

#include <vector>

#include "nmgauge/disorder.hpp"
#include "nmgauge/lattice.hpp"
#include "nmgauge/operators.hpp"

namespace nmgauge {

struct Limits {
  int quantum_spins = kDefaultQuantumSpinCap;
  int classical_spins = 20;
  DisorderLimits disorder;
};

/// Lattice, one bond family per interaction order, and the coupling ensemble.
struct Model {
  Lattice lattice;
  std::vector<BondFamily> families;
  Ensemble ensemble;
  Limits limits;

  int n_sites() const noexcept { return lattice.volume(); }
  /// Index of the family with order p, or -1.
  int family_index(int p) const noexcept;
  /// Throws ConfigError on duplicate orders or missing ensemble entries.
  void validate() const;
};

/// Copy of `model` whose p = 1 family carries the deterministic uniform
/// field mu1 (Delta_1 = 0). The family is appended if absent so the MC
/// draws of the existing families are unchanged.
Model with_uniform_field(const Model& model, double mu1);

}  // namespace nmgauge
