#include "nmgauge/sweep.hpp"

#include <exception>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace nmgauge {

namespace {

SampleTable allocate(const DisorderSource& source, std::size_t columns) {
  SampleTable t;
  t.method = source.method();
  t.columns = columns;
  t.values.assign(source.size() * columns, 0.0);
  t.weights.assign(source.size(), 0.0);
  return t;
}

void store(SampleTable& t, std::size_t i, const std::vector<double>& row, double weight) {
  if (row.size() != t.columns)
    throw std::logic_error("kernel returned " + std::to_string(row.size()) + " values, expected " +
                           std::to_string(t.columns));
  std::copy(row.begin(), row.end(), t.values.begin() + static_cast<std::ptrdiff_t>(i * t.columns));
  t.weights[i] = weight;
}

}  // namespace

SampleTable evaluate_samples_serial(const DisorderSource& source, const RealizationKernel& kernel,
                                    std::size_t columns) {
  auto t = allocate(source, columns);
  for (std::size_t i = 0; i < source.size(); ++i) {
    auto ws = source.realization(i);
    store(t, i, kernel(ws.couplings), ws.weight);
  }
  return t;
}

SampleTable evaluate_samples_parallel(const DisorderSource& source, const RealizationKernel& kernel,
                                      std::size_t columns) {
  auto t = allocate(source, columns);
  const auto n = static_cast<long long>(source.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      auto ws = source.realization(static_cast<std::size_t>(i));
      store(t, static_cast<std::size_t>(i), kernel(ws.couplings), ws.weight);
    } catch (...) {
#pragma omp critical(nmgauge_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return t;
}

SampleTable evaluate_samples(const DisorderSource& source, const RealizationKernel& kernel, std::size_t columns,
                             Execution exec) {
  return exec == Execution::parallel ? evaluate_samples_parallel(source, kernel, columns)
                                     : evaluate_samples_serial(source, kernel, columns);
}

std::vector<double> row_values(const SampleTable& table, const std::function<double(std::span<const double>)>& stat) {
  std::vector<double> v(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) v[i] = stat(table.row(i));
  return v;
}

DisorderAverage average_rows(const SampleTable& table, const std::function<double(std::span<const double>)>& stat) {
  const auto v = row_values(table, stat);
  return disorder_average(v, table.weights, table.method);
}

DisorderAverage average_column(const SampleTable& table, std::size_t column) {
  if (column >= table.columns) throw std::out_of_range("sample table column out of range");
  return average_rows(table, [column](std::span<const double> r) { return r[column]; });
}

}  // namespace nmgauge
