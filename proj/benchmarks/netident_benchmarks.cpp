#include <benchmark/benchmark.h>

#include "netident/algebraic_identifiability.hpp"
#include "netident/assignation_conditions.hpp"
#include "netident/graph_analysis.hpp"
#include "netident/harness.hpp"

namespace {

using namespace netident;

NetworkStructure structure_of_size(int n, int io, UnknownPolicy unknowns, int max_product = 9) {
  CampaignConfig config;
  config.n_min = n;
  config.n_max = n;
  config.io_max = io;
  config.max_product = max_product;
  config.unknowns = unknowns;
  config.density_min = 0.3;
  config.density_max = 0.3;
  config.seed = 11;
  return generate_structure(config, structure_seed(config, 0));
}

void BM_BuildKHat(benchmark::State& state) {
  const auto s = structure_of_size(static_cast<int>(state.range(0)), 3, UnknownPolicy::at_most);
  const RealizationPair pair = sample_pair(s, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_K_hat(pair.g, pair.g_prime));
}
BENCHMARK(BM_BuildKHat)->Arg(6)->Arg(12)->Arg(24)->Arg(48);

void BM_GenericRankKHat(benchmark::State& state) {
  const auto s = structure_of_size(static_cast<int>(state.range(0)), 3, UnknownPolicy::at_most);
  for (auto _ : state) benchmark::DoNotOptimize(generic_rank_K_hat(s));
}
BENCHMARK(BM_GenericRankKHat)->Arg(6)->Arg(12)->Arg(24);

void BM_Analyze(benchmark::State& state) {
  const auto s = structure_of_size(static_cast<int>(state.range(0)), 3, UnknownPolicy::at_most);
  for (auto _ : state) benchmark::DoNotOptimize(analyze(s));
}
BENCHMARK(BM_Analyze)->Arg(6)->Arg(12);

void BM_MaxVertexDisjoint(benchmark::State& state) {
  const auto s = structure_of_size(static_cast<int>(state.range(0)), 3, UnknownPolicy::at_most);
  for (auto _ : state) benchmark::DoNotOptimize(max_vertex_disjoint(s, s.excited(), s.measured()));
}
BENCHMARK(BM_MaxVertexDisjoint)->Arg(12)->Arg(48)->Arg(192);

void BM_ConnectedBijections(benchmark::State& state) {
  const auto s = structure_of_size(8, 3, UnknownPolicy::exact, 6);
  for (auto _ : state) benchmark::DoNotOptimize(check_prop6(s));
}
BENCHMARK(BM_ConnectedBijections);

void BM_PairedAssignations(benchmark::State& state) {
  const auto s = structure_of_size(8, 3, UnknownPolicy::exact, 6);
  for (auto _ : state) benchmark::DoNotOptimize(check_theorem1(s));
}
BENCHMARK(BM_PairedAssignations);

void BM_LeibnizDeterminant(benchmark::State& state) {
  const auto s = structure_of_size(8, 3, UnknownPolicy::exact, static_cast<int>(state.range(0)));
  const RealizationPair pair = sample_pair(s, 2);
  for (auto _ : state) benchmark::DoNotOptimize(leibniz_det_K_hat(pair.g, pair.g_prime));
}
BENCHMARK(BM_LeibnizDeterminant)->Arg(4)->Arg(6);

void BM_GroupedDeterminant(benchmark::State& state) {
  const auto s = structure_of_size(8, 3, UnknownPolicy::exact, static_cast<int>(state.range(0)));
  const RealizationPair pair = sample_pair(s, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gamma_factorization_det(pair.g, pair.g_prime));
}
BENCHMARK(BM_GroupedDeterminant)->Arg(4)->Arg(6);

void BM_CampaignStructure(benchmark::State& state) {
  CampaignConfig config;
  config.n_max = 12;
  config.seed = 5;
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_seed(config, structure_seed(config, i++ % 64)));
}
BENCHMARK(BM_CampaignStructure);

}  // namespace

BENCHMARK_MAIN();
