#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nmgauge/config.hpp"
#include "nmgauge/errors.hpp"
#include "nmgauge/report.hpp"

using namespace nmgauge;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "lattice": {"L": 4, "d": 1, "boundary": "periodic"},
    "families": [{"p": 1}, {"p": 2}],
    "ensemble": {"kind": "binomial", "params": {"1": {"mu": 1.0, "r": 0.8}, "2": {"mu": 1.0, "r": 0.8}}},
    "thermal": {"nishimori": true, "h": 0.5},
    "disorder": {"method": "enumeration"},
    "seed": 7
  })");
}

std::string error_key(const json& j) {
  try {
    ExperimentConfig::from_json(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST(Config, ResolvedEchoRoundTrips) {
  const auto c = ExperimentConfig::from_json(minimal());
  const json echo = c.to_json();
  EXPECT_TRUE(echo.contains("tolerances"));
  EXPECT_TRUE(echo.contains("limits"));
  const auto again = ExperimentConfig::from_json(echo);
  EXPECT_EQ(again.to_json(), echo);
}

TEST(Config, BuildsModelAndNishimoriPoint) {
  const auto c = ExperimentConfig::from_json(minimal());
  const Model m = c.build_model();
  EXPECT_EQ(m.n_sites(), 4);
  ASSERT_EQ(m.families.size(), 2u);
  EXPECT_EQ(m.families[1].size(), 4u);
  const auto t = c.thermal_point(m);
  EXPECT_DOUBLE_EQ(t.beta, 0.5 * std::log(4.0));
  EXPECT_DOUBLE_EQ(t.h, 0.5);
  EXPECT_EQ(c.disorder.seed, 7u);
}

TEST(Config, ErrorsNameTheKey) {
  auto j = minimal();
  j["lattice"]["sides"] = 3;
  EXPECT_EQ(error_key(j), "lattice.sides");
  j = minimal();
  j["disorder"]["method"] = "bootstrap";
  EXPECT_EQ(error_key(j), "disorder.method");
  j = minimal();
  j["ensemble"]["params"]["1"]["r"] = 1.0;
  j["ensemble"]["params"]["2"]["r"] = 1.0;
  const auto c = ExperimentConfig::from_json(j);
  EXPECT_THROW(c.thermal_point(c.build_model()), ConfigError);
  j = minimal();
  j.erase("lattice");
  EXPECT_EQ(error_key(j), "lattice");
  j = minimal();
  j["lattice"]["L"] = 30;
  const auto big = ExperimentConfig::from_json(j);
  EXPECT_THROW(big.build_model(), BudgetError);
}

TEST(Report, SeventeenDigitRoundTrip) {
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(eng) * std::pow(10.0, (i % 40) - 20);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(std::strtod(format_double(0.1).c_str(), nullptr), 0.1);
}

TEST(Report, EmptyRowsGiveHeaderOnly) { EXPECT_EQ(to_csv({}), csv_header() + "\n"); }

TEST(Report, CsvQuotesAndOptionals) {
  ReportRow r;
  r.suite = "s";
  r.observable = "two_point {0},{1}";
  r.estimate = 0.5;
  r.reference = 0.25;
  const auto line = csv_line(r);
  EXPECT_NE(line.find("\"two_point {0},{1}\""), std::string::npos);
  EXPECT_NE(line.find("0.25"), std::string::npos);
}

TEST(Report, JsonEmbedsResolvedConfig) {
  const auto c = ExperimentConfig::from_json(minimal());
  ReportRow r;
  r.suite = "x";
  r.estimate = 1.0 / 3.0;
  const auto dir = std::filesystem::temp_directory_path() / "nmgauge_report_test";
  const auto files = emit({r}, c.to_json(), dir, "t");
  std::ifstream in(files.json);
  const json doc = json::parse(in);
  EXPECT_EQ(ExperimentConfig::from_json(doc.at("config")).to_json(), c.to_json());
  EXPECT_EQ(doc.at("rows").at(0).at("estimate").get<double>(), 1.0 / 3.0);
  std::ifstream csv(files.csv);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, csv_header());
  std::filesystem::remove_all(dir);
}

TEST(Report, UnwritablePathThrows) {
  EXPECT_THROW(emit({}, json::object(), "/proc/nmgauge_cannot_write", "t"), std::runtime_error);
}
