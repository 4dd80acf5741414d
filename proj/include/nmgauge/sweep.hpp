#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nmgauge/disorder.hpp"

namespace nmgauge {

enum class Execution { serial, parallel };

/// Row i holds the kernel output for realization i; rows are stored in index
/// order whatever thread computed them.
struct SampleTable {
  AverageMethod method = AverageMethod::enumeration;
  std::size_t columns = 0;
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t rows() const noexcept { return weights.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * columns, columns};
  }
};

using RealizationKernel = std::function<std::vector<double>(const CouplingSample&)>;

/// Reference loop.
SampleTable evaluate_samples_serial(const DisorderSource& source, const RealizationKernel& kernel,
                                    std::size_t columns);
/// OpenMP loop over realizations; bit-identical to the serial loop.
SampleTable evaluate_samples_parallel(const DisorderSource& source, const RealizationKernel& kernel,
                                      std::size_t columns);
SampleTable evaluate_samples(const DisorderSource& source, const RealizationKernel& kernel, std::size_t columns,
                             Execution exec);

/// Disorder average of a per-row statistic.
DisorderAverage average_rows(const SampleTable& table, const std::function<double(std::span<const double>)>& stat);
DisorderAverage average_column(const SampleTable& table, std::size_t column);

/// Same, plus the per-row values for paired comparisons.
std::vector<double> row_values(const SampleTable& table, const std::function<double(std::span<const double>)>& stat);

}  // namespace nmgauge
