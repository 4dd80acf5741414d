#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nmgauge {

enum class AverageMethod { mc, quadrature, enumeration };

const char* to_string(AverageMethod m) noexcept;

// Where a coupling realization came from: (seed, sample) for MC, the flat
// node or configuration index for quadrature and enumeration.
struct Provenance {
  AverageMethod method = AverageMethod::mc;
  std::uint64_t seed = 0;
  std::size_t index = 0;
};

/// One realization of every J_X^p. by_family[f][k] is the coupling of bond k
/// in family f, in the family's bond order.
struct CouplingSample {
  std::vector<std::vector<double>> by_family;
  Provenance provenance;
};

}  // namespace nmgauge
