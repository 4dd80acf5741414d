#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace nmgauge {

/// One self-describing result line. `reference` holds the right-hand side of
/// an identity; `deviation` its |LHS - RHS| (or sigmas for MC).
struct ReportRow {
  std::string suite;
  std::string observable;
  std::string parameters;
  double estimate = 0.0;
  double error = 0.0;
  std::optional<double> reference;
  std::optional<double> deviation;
  std::optional<double> bound;
  std::optional<double> margin;
  std::string method;
  std::uint64_t seed = 0;
  bool pass = true;
  double wall_time = 0.0;
};

/// Shortest text that parses back to the same double (17 significant digits).
std::string format_double(double v);

std::string csv_header();
std::string csv_line(const ReportRow& row);
std::string to_csv(const std::vector<ReportRow>& rows);
nlohmann::json to_json(const std::vector<ReportRow>& rows, const nlohmann::json& resolved_config);

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes <dir>/<prefix>.csv and <dir>/<prefix>.json. Throws std::runtime_error
/// if the directory cannot be created or a file cannot be written.
EmittedFiles emit(const std::vector<ReportRow>& rows, const nlohmann::json& resolved_config,
                  const std::filesystem::path& dir, const std::string& prefix);

}  // namespace nmgauge
