// Serial reference vs OpenMP kernels.

#include "rgraph/baselines.hpp"
#include "rgraph/dataset.hpp"
#include "rgraph/elasticnet.hpp"
#include "rgraph/graph.hpp"
#include "rgraph/walk.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rgraph;

Execution mode(const benchmark::State& state) {
  return state.range(1) ? Execution::parallel : Execution::serial;
}

DataMatrix dataset(int per_subspace) {
  const GenConfig g{100, {5, 5, 5}, {per_subspace, per_subspace, per_subspace}, per_subspace / 2, 7};
  return generate_synthetic(g).data;
}

void BM_SelfRepresentation(benchmark::State& state) {
  const DataMatrix x = dataset(static_cast<int>(state.range(0)));
  SolverParams p;
  p.alpha = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(self_representation(x, p, mode(state)));
  state.SetLabel(state.range(1) ? "parallel" : "serial");
  state.counters["N"] = static_cast<double>(x.size());
}

void BM_WalkStep(benchmark::State& state) {
  const DataMatrix x = dataset(static_cast<int>(state.range(0)));
  SolverParams p;
  p.alpha = 5.0;
  const TransitionMatrix tm = transition_matrix(self_representation(x, p));
  const Eigen::SparseMatrix<double> cols = tm.probs;
  const Eigen::VectorXd pi = Eigen::VectorXd::Constant(tm.size(), 1.0 / static_cast<double>(tm.size()));
  Eigen::VectorXd out(tm.size());
  for (auto _ : state) {
    if (state.range(1)) {
      kernels::step_parallel(cols, pi, out);
    } else {
      kernels::step_serial(tm.probs, pi, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel(state.range(1) ? "parallel" : "serial");
  state.counters["nnz"] = static_cast<double>(tm.probs.nonZeros());
}

void BM_CesaroScores(benchmark::State& state) {
  const DataMatrix x = dataset(static_cast<int>(state.range(0)));
  SolverParams p;
  p.alpha = 5.0;
  const TransitionMatrix tm = transition_matrix(self_representation(x, p));
  WalkOptions opts;
  opts.steps = 1000;
  opts.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(cesaro_scores(tm, opts));
  state.SetLabel(state.range(1) ? "parallel" : "serial");
}

void BM_OutRank(benchmark::State& state) {
  const DataMatrix x = dataset(static_cast<int>(state.range(0)));
  OutRankOptions opts;
  opts.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(outrank_scores(x, opts));
  state.SetLabel(state.range(1) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_SelfRepresentation)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WalkStep)->ArgsProduct({{64, 256, 1024}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CesaroScores)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OutRank)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
