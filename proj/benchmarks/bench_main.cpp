#include <benchmark/benchmark.h>

#include <random>

#include "gramdim/completion.hpp"
#include "gramdim/io.hpp"
#include "gramdim/minors.hpp"
#include "gramdim/stress.hpp"

using namespace gramdim;

namespace {

Graph chordal_band(int n, int width) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n && j <= i + width; ++j) g.add_edge(i, j);
  return g;
}

PartialMatrix band_instance(int n, int width) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Matrix w(n, width + 1);
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j) w(i, j) = normal(rng);
  return project(w * w.transpose(), chordal_band(n, width));
}

void BM_ClassifyPetersen(benchmark::State& state) {
  const Graph g = builtin::petersen();
  for (auto _ : state) benchmark::DoNotOptimize(classify_gram_dimension(g));
}
BENCHMARK(BM_ClassifyPetersen)->Unit(benchmark::kMillisecond);

void BM_ClassifyV8(benchmark::State& state) {
  const Graph g = builtin::v8();
  for (auto _ : state) benchmark::DoNotOptimize(classify_gram_dimension(g));
}
BENCHMARK(BM_ClassifyV8)->Unit(benchmark::kMillisecond);

void BM_CompleteChordal(benchmark::State& state) {
  const auto a = band_instance(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(complete_chordal(a));
}
BENCHMARK(BM_CompleteChordal)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_FlattenK222(benchmark::State& state) {
  const auto a = canonical_k222_instance();
  for (auto _ : state) benchmark::DoNotOptimize(flatten(a, Edge(0, 3)));
}
BENCHMARK(BM_FlattenK222)->Unit(benchmark::kMillisecond);

void BM_FlattenFoldV8(benchmark::State& state) {
  const auto a = random_instance(builtin::v8(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(flatten_and_fold(a, 4));
}
BENCHMARK(BM_FlattenFoldV8)->Unit(benchmark::kMillisecond);

void BM_FlattenFoldPrism(benchmark::State& state) {
  const auto a = random_instance(builtin::c5xc2(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(flatten_and_fold(a, 4));
}
BENCHMARK(BM_FlattenFoldPrism)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
