// Serial reference vs OpenMP backends on the hot kernels. Thread count
// follows RELAYCAST_WORKERS (default: OpenMP's choice).

#include <benchmark/benchmark.h>

#include <memory>

#include "relaycast/complementary.hpp"
#include "relaycast/engine.hpp"
#include "relaycast/rng.hpp"

using namespace relaycast;

namespace {

const Graph& bench_graph() {
  static const Graph g = build_random_regular(4096, 32, 11);
  return g;
}

Backend backend_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Backend::serial : Backend::openmp;
}

void BM_matvec(benchmark::State& state) {
  const Graph& g = bench_graph();
  std::vector<double> x(g.n()), y(g.n());
  Rng rng(3);
  for (double& v : x) v = rng.uniform();
  const Backend b = backend_of(state);
  for (auto _ : state) {
    adjacency_matvec(g, x, y, b);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.n() * g.d()));
}

void BM_neighbor_counts(benchmark::State& state) {
  const Graph& g = bench_graph();
  std::vector<std::uint8_t> bits(g.n());
  std::vector<std::uint32_t> out(g.n());
  Rng rng(5);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
  const Backend b = backend_of(state);
  for (auto _ : state) {
    neighbor_counts(g, bits, out, b);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.n() * g.d()));
}

void BM_engine_pure(benchmark::State& state) {
  const Graph& g = bench_graph();
  EngineConfig ec;
  ec.graph = &g;
  ec.faults = make_node_set({1, 2, 3, 4, 5, 6, 7, 8});
  ec.script.kind = ScriptKind::flicker;
  ec.initiation.I0 = neighborhood(g, 100, 1);
  ec.excitation_threshold = 8;
  ec.trigger_threshold = 16;
  ec.k_max = 64;
  ec.backend = backend_of(state);
  for (auto _ : state) {
    Trace t = run(ec);
    benchmark::DoNotOptimize(t);
  }
}

void BM_engine_complementary(benchmark::State& state) {
  const Graph& g = bench_graph();
  static const LocalSelection sel = select_local_sets(g, 256, 3);
  EngineConfig ec;
  ec.graph = &g;
  ec.faults = make_node_set({1, 2, 3, 4, 5, 6, 7, 8});
  ec.script.kind = ScriptKind::blast;
  ec.initiation.I0 = NodeSet(sel.of(100).begin(), sel.of(100).end());
  ec.initiation.k0 = 3;
  ec.excitation_threshold = 8;
  ec.mode = TriggerMode::complementary;
  ec.trigger_threshold = 128;
  ec.selection = &sel;
  ec.latency = 3;
  ec.k_max = 64;
  ec.backend = backend_of(state);
  for (auto _ : state) {
    Trace t = run(ec);
    benchmark::DoNotOptimize(t);
  }
}

}  // namespace

BENCHMARK(BM_matvec)->Arg(0)->Arg(1)->ArgName("openmp");
BENCHMARK(BM_neighbor_counts)->Arg(0)->Arg(1)->ArgName("openmp");
BENCHMARK(BM_engine_pure)->Arg(0)->Arg(1)->ArgName("openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_engine_complementary)->Arg(0)->Arg(1)->ArgName("openmp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
