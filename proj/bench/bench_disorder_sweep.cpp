#include <benchmark/benchmark.h>

#include "nmgauge/nishimori.hpp"

namespace {

using namespace nmgauge;

Model bench_model(int L) {
  Lattice lat(L, 1, 20);
  std::vector<BondFamily> fams;
  fams.push_back(field_family(lat));
  fams.push_back(enumerate_bonds(lat, InteractionShape{2, {{0}, {1}}}, Boundary::periodic));
  GaussianEnsemble g;
  g.by_order[1] = {0.3, 1.0};
  g.by_order[2] = {0.3, 1.0};
  return Model{lat, fams, g, {}};
}

void run(benchmark::State& state, Execution exec) {
  const Model m = bench_model(static_cast<int>(state.range(0)));
  SourceSpec spec;
  spec.method = AverageMethod::mc;
  spec.mc_samples = static_cast<std::size_t>(state.range(1));
  spec.seed = 7;
  NishimoriOptions opts;
  opts.execution = exec;
  opts.allow_off_manifold = true;
  for (auto _ : state) {
    auto data = collect_identity_data(m, spec, ThermalPoint{0.3, 0.5}, opts, false);
    benchmark::DoNotOptimize(data.table.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_IdentitiesSerial(benchmark::State& s) { run(s, Execution::serial); }
void BM_IdentitiesParallel(benchmark::State& s) { run(s, Execution::parallel); }

}  // namespace

BENCHMARK(BM_IdentitiesSerial)->Args({6, 256})->Args({7, 128})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IdentitiesParallel)->Args({6, 256})->Args({7, 128})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
