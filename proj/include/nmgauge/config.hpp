#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nmgauge/bounds.hpp"
#include "nmgauge/model.hpp"
#include "nmgauge/nishimori.hpp"

namespace nmgauge {

struct FamilySpec {
  int p = 0;
  /// Each shape is a list of p offset vectors, one of them the origin.
  std::vector<std::vector<std::vector<int>>> shapes;
};

struct ThermalSpec {
  double beta = 1.0;
  double h = 0.0;
  bool nishimori = false;  // take beta from the ensemble's Nishimori point
};

struct SweepSpec {
  std::vector<double> beta;
  std::vector<double> h;
  std::vector<double> mu1;
};

struct GaugeSuiteSpec {
  int samples = 100;
  double h_max = 2.0;
};

/// Everything a run needs. to_json() echoes every field, defaults included.
struct ExperimentConfig {
  int L = 4;
  int d = 1;
  Boundary boundary = Boundary::periodic;
  std::vector<FamilySpec> families;
  Ensemble ensemble;
  ThermalSpec thermal;
  SourceSpec disorder;
  std::vector<ThermalPoint> points;  // bounds grid; empty means the thermal point
  SweepSpec sweep;
  std::vector<double> a2_grid;
  GaugeSuiteSpec gauge;
  FieldBetaPolicy field_policy = FieldBetaPolicy::quantum_beta;
  Tolerances tolerances;
  Limits limits;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string prefix = "report";

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::json to_json() const;

  Model build_model() const;
  /// Resolves the Nishimori flag.
  ThermalPoint thermal_point(const Model& model) const;
};

}  // namespace nmgauge
