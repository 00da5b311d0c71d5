// Serial reference kernels against their OpenMP counterparts on a d=4, m=3 problem.
#include <benchmark/benchmark.h>

#include <memory>

#include "hwr/hwr.hpp"
#include "hwr/kernels.hpp"

namespace {

using namespace hwr;

struct Fixture {
  WaveletBasis basis{SplineOrder{3}};
  std::shared_ptr<const HyperbolicIndexSet> idx;
  SampleSet X;
  kernels::CsrArrays A;
  std::vector<double> x, r, y, z;

  Fixture() {
    idx = std::make_shared<const HyperbolicIndexSet>(build_restricted(4, 5, SubsetFamily::up_to_order(4, 2)));
    X = sample_uniform(4, log_oversampling(idx->size()), 1);
    A = kernels::assemble_serial(basis, *idx, X);
    const CounterRng rng(1, 2);
    x.resize(idx->size());
    r.resize(X.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(i) - 0.5;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rng.uniform(x.size() + i) - 0.5;
    y.resize(X.size());
    z.resize(idx->size());
  }
  kernels::CsrView view() const { return {X.size(), idx->size(), A.row_ptr.data(), A.col.data(), A.val.data()}; }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void set_counters(benchmark::State& state) {
  const auto& f = fixture();
  state.counters["nnz"] = static_cast<double>(f.A.val.size());
  state.counters["rows"] = static_cast<double>(f.X.size());
}

void BM_MatvecSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    kernels::matvec_serial(f.view(), f.x.data(), f.y.data());
    benchmark::DoNotOptimize(f.y.data());
  }
  set_counters(state);
}

void BM_MatvecOmp(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    kernels::matvec_omp(f.view(), f.x.data(), f.y.data(), static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(f.y.data());
  }
  set_counters(state);
}

void BM_RmatvecSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    kernels::rmatvec_serial(f.view(), f.r.data(), f.z.data());
    benchmark::DoNotOptimize(f.z.data());
  }
  set_counters(state);
}

void BM_RmatvecOmp(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    kernels::rmatvec_omp(f.view(), f.r.data(), f.z.data(), static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(f.z.data());
  }
  set_counters(state);
}

void BM_AssembleSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::assemble_serial(f.basis, *f.idx, f.X));
  set_counters(state);
}

void BM_AssembleOmp(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::assemble_omp(f.basis, *f.idx, f.X, static_cast<int>(state.range(0))));
  set_counters(state);
}

void BM_EvaluateSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    kernels::evaluate_serial(f.basis, *f.idx, f.x.data(), f.X.nodes.data(), f.X.size(), f.y.data());
    benchmark::DoNotOptimize(f.y.data());
  }
}

void BM_EvaluateOmp(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    kernels::evaluate_omp(f.basis, *f.idx, f.x.data(), f.X.nodes.data(), f.X.size(), f.y.data(), static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(f.y.data());
  }
}

void thread_counts(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= std::max(1, max_threads()); t *= 2) b->Arg(t);
}

}  // namespace

BENCHMARK(BM_MatvecSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatvecOmp)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RmatvecSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RmatvecOmp)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleOmp)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateOmp)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
