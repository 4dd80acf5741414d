// Batch runner: nmgauge <subcommand> --config PATH [--seed N] [--out DIR] [--threads N]
//
// NMGAUGE_LOG=quiet|info|debug controls stderr verbosity (default info).

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nmgauge/errors.hpp"
#include "nmgauge/runner.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("NMGAUGE_LOG");
  if (!env) return 1;
  const std::string v = env;
  if (v == "quiet" || v == "0") return 0;
  if (v == "debug" || v == "2") return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nmgauge;
  CLI::App app{"Gauge-symmetry and Nishimori-manifold checks for disordered quantum Ising models"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 0;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
    sub->add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  const int verbosity = log_level();

  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::load(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.disorder.seed = *seed;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  SuiteResult result;
  try {
    result = run_suite(cfg, subcommand);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  try {
    const auto files = emit(result.rows, cfg.to_json(), cfg.out_dir, cfg.prefix);
    if (verbosity >= 1) std::cerr << "wrote " << files.csv.string() << " and " << files.json.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::size_t failed = 0;
  for (const auto& r : result.rows) {
    if (!r.pass) ++failed;
    if (verbosity >= 2 || (!r.pass && verbosity >= 1))
      std::cerr << (r.pass ? "ok   " : "FAIL ") << r.observable << " [" << r.parameters << "] "
                << format_double(r.estimate) << "\n";
  }
  if (verbosity >= 1)
    std::cerr << subcommand << ": " << result.rows.size() << " rows, " << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}
