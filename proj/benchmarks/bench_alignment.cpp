#include <benchmark/benchmark.h>

#include <random>

#include "aqa/alignment.hpp"
#include "aqa/features.hpp"
#include "aqa/synthetic.hpp"

namespace {

using namespace aqa;

FeatureSequence random_features(std::uint64_t seed, std::size_t frames, FeatureMode mode) {
  std::mt19937_64 rng(seed);
  return extract_sequence(synthetic::random_sequence(rng, frames), FeatureRegistry::defaults(mode));
}

void BM_Extraction(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto seq = synthetic::random_sequence(rng, 90);
  const auto reg = FeatureRegistry::defaults(FeatureMode::d2d3);
  for (auto _ : state) benchmark::DoNotOptimize(extract_sequence(seq, reg));
  state.SetItemsProcessed(state.iterations() * 90);
}
BENCHMARK(BM_Extraction);

void BM_DistanceMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_features(2, n, FeatureMode::d2d3);
  const auto b = random_features(3, n, FeatureMode::d2d3);
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(a, b, {}));
}
BENCHMARK(BM_DistanceMatrix)->Arg(30)->Arg(90)->Arg(240);

void BM_Align(benchmark::State& state) {
  const auto method = static_cast<AlignMethod>(state.range(0));
  const auto a = random_features(4, 90, FeatureMode::d2d3);
  const auto b = random_features(5, 90, FeatureMode::d2d3);
  const auto dm = distance_matrix(a, b, {});
  for (auto _ : state) benchmark::DoNotOptimize(align(dm, method));
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_Align)
    ->Arg(static_cast<int>(AlignMethod::dtw))
    ->Arg(static_cast<int>(AlignMethod::greedy))
    ->Arg(static_cast<int>(AlignMethod::acdtw));

// End-to-end alignment of two 90-frame sequences, distance matrix included.
void BM_AcdtwEndToEnd(benchmark::State& state) {
  const auto mode = static_cast<FeatureMode>(state.range(0));
  const auto a = random_features(6, 90, mode);
  const auto b = random_features(7, 90, mode);
  for (auto _ : state) benchmark::DoNotOptimize(acdtw(a, b, {}));
  state.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(BM_AcdtwEndToEnd)
    ->Arg(static_cast<int>(FeatureMode::d2))
    ->Arg(static_cast<int>(FeatureMode::d3))
    ->Arg(static_cast<int>(FeatureMode::d2d3))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
