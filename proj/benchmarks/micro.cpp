#include <benchmark/benchmark.h>

#include <vector>

#include "vortnet/vortnet.hpp"

using namespace vortnet;

namespace {

VorticityField field_of_side(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  return synth_turbulence_field(side, side, 0);
}

}  // namespace

static void BM_Column(benchmark::State& state) {
  const AdjacencyOperator op(field_of_side(state), 1);
  std::vector<double> out(op.size());
  std::size_t j = 0;
  for (auto _ : state) {
    op.column(j, out);
    benchmark::DoNotOptimize(out.data());
    j = (j + 7919) % op.size();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(op.size()));
}
BENCHMARK(BM_Column)->Arg(64)->Arg(128)->Arg(256);

// Matrix-free product against the stored matrix.
static void BM_ApplyImplicit(benchmark::State& state) {
  const AdjacencyOperator op(field_of_side(state), 1);
  std::vector<double> x(op.size(), 1.0), y(op.size());
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ApplyImplicit)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ApplyDense(benchmark::State& state) {
  const AdjacencyOperator implicit(field_of_side(state), 1);
  const DenseSymmetricOperator op(implicit.materialize(std::uint64_t{1} << 30));
  std::vector<double> x(op.size(), 1.0), y(op.size());
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ApplyDense)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Decompose(benchmark::State& state, Method method) {
  const auto field = field_of_side(state);
  const AdjacencyOperator op(field, 1);
  const auto sample = draw_sample(SamplerKind::halton, field.grid(), sample_count(0.10, field.size(), 1), 0);
  for (auto _ : state) {
    const auto r = method == Method::nystrom ? nystrom(op, sample, {.k = 1, .workers = 1})
                                             : sketch_svd(op, sample, {.k = 1, .workers = 1});
    state.SetIterationTime(r.times.decompose);
  }
}
BENCHMARK_CAPTURE(BM_Decompose, nystrom, Method::nystrom)->Arg(32)->Arg(64)->UseManualTime()->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, sketch_svd, Method::sketch_svd)->Arg(32)->Arg(64)->UseManualTime()->Unit(benchmark::kMillisecond);

static void BM_HaltonSample(benchmark::State& state) {
  const GridSpec grid{256, 256, 1.0, 1.0};
  const auto l = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(draw_sample(SamplerKind::halton, grid, l, seed++).indices.data());
}
BENCHMARK(BM_HaltonSample)->Arg(655)->Arg(6554);

static void BM_UniformSample(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_uniform(65536, l, seed++).indices.data());
}
BENCHMARK(BM_UniformSample)->Arg(655)->Arg(6554);
BENCHMARK_MAIN();
