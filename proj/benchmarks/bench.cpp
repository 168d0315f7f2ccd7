#include <benchmark/benchmark.h>

#include "gibmap/hypercube.hpp"
#include "gibmap/json_io.hpp"
#include "gibmap/oracle.hpp"
#include "gibmap/search.hpp"

using namespace gibmap;

namespace {

Network fixture(const char* name) {
  return validate_network(load_network_file(std::string(GIBMAP_FIXTURES) + "/" + name));
}

void BM_JointExact(benchmark::State& state) {
  RandomNetSpec spec;
  spec.nodeCount = static_cast<int>(state.range(0));
  spec.maxParents = 3;
  spec.seed = 7;
  Network net = random_network(spec, 0);
  GAssignment a;
  a.assign(0, net.permissible_sets(0).front());
  for (auto _ : state) benchmark::DoNotOptimize(joint_prob_exact(net, a, 1e9));
}
BENCHMARK(BM_JointExact)->Arg(6)->Arg(10)->Arg(14);

void BM_MaximalHypercubes(benchmark::State& state) {
  Network net = fixture("tracks.json");
  int at = net.id_of("at-tracks");
  GAssignment base;
  base.assign(at, ValueSet::single(at, net.domain_size(at),
                                   static_cast<std::size_t>(net.value_index(at, "T"))));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        maximal_gib_hypercubes(net, at, base, 0.0, kDefaultEps, false));
}
BENCHMARK(BM_MaximalHypercubes);

void BM_SearchTracks(benchmark::State& state) {
  Network net = fixture("tracks.json");
  Evidence ev = parse_evidence(net, {{"at-tracks", "T"}});
  for (auto _ : state) benchmark::DoNotOptimize(gib_map_search(net, ev));
}
BENCHMARK(BM_SearchTracks);

void BM_SearchRandom(benchmark::State& state) {
  RandomNetSpec spec;
  spec.nodeCount = static_cast<int>(state.range(0));
  spec.seed = 11;
  Network net = random_network(spec, 0);
  Evidence ev;
  ev[0] = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gib_map_search(net, ev));
}
BENCHMARK(BM_SearchRandom)->Arg(5)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
