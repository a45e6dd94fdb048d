#include <benchmark/benchmark.h>

#include "lgbt/embedding_audit.hpp"
#include "lgbt/experiments.hpp"
#include "lgbt/monotonicity.hpp"
#include "lgbt/parallel.hpp"

using namespace lgbt;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel(" + std::to_string(max_threads()) + ")");
}

void BM_goodness_monte_carlo(benchmark::State& state) {
  // a one-hot embedding never fails, so every trial runs
  const Embedding x = one_hot_embedding(std::vector<std::size_t>{3, 3, 2}, 1.0);
  GoodnessOptions opt;
  opt.n_laplacians = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(good_check_monte_carlo(x, opt, RngStream(1), mode(state)));
  label(state);
}

void BM_goodness_heatmap(benchmark::State& state) {
  HeatmapSpec spec;
  spec.max_alternatives = 5;
  spec.max_dims = 5;
  spec.embeddings_per_cell = 40;
  spec.laplacians_per_embedding = 200;
  for (auto _ : state) benchmark::DoNotOptimize(run_goodness_heatmap(spec, RngStream(2), mode(state)));
  label(state);
}

void BM_nmse_vs_dims(benchmark::State& state) {
  const NmseVsDimsSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(run_nmse_vs_dims(spec, RngStream(3), mode(state)));
  label(state);
}

void BM_monotonicity_audit(benchmark::State& state) {
  const ModelConfig cfg{RootLaw(RootLawKind::uniform), 1.0, one_hot_embedding(std::vector<std::size_t>{3, 3}, 1.0),
                        Matrix::Zero(6, 6)};
  RngStream rng(4);
  const Dataset data = random_dataset(6, 20, cfg.law, rng);
  for (auto _ : state) benchmark::DoNotOptimize(run_monotonicity_audit(cfg, data, 200, RngStream(5), 1e-7, mode(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_goodness_monte_carlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_goodness_heatmap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nmse_vs_dims)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_monotonicity_audit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
