// Timing comparison of the OpenMP kernels against their serial reference
// twins, on the operators an actual run spends its time in.
//
//   bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "micromorphx/assembly.hpp"

using namespace mmx;

namespace {

const SystemMatrices& system_16() {
  static const SystemMatrices sm = assemble_system(build_grid({16, 16, 16}), MaterialModel{});
  return sm;
}

VectorXd random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = dist(rng);
  return x;
}

void bm_spmv_parallel(benchmark::State& state) {
  const SystemMatrices& sm = system_16();
  const VectorXd x = random_vector(sm.n, 7);
  VectorXd y(sm.n);
  for (auto _ : state) {
    kernels::spmv(sm.K, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * sm.K.nnz());
}
BENCHMARK(bm_spmv_parallel);

void bm_spmv_serial(benchmark::State& state) {
  const SystemMatrices& sm = system_16();
  const VectorXd x = random_vector(sm.n, 7);
  VectorXd y(sm.n);
  for (auto _ : state) {
    ref::spmv(sm.K, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * sm.K.nnz());
}
BENCHMARK(bm_spmv_serial);

void bm_dot_parallel(benchmark::State& state) {
  const SystemMatrices& sm = system_16();
  const VectorXd a = random_vector(sm.n, 11);
  const VectorXd b = random_vector(sm.n, 13);
  for (auto _ : state) {
    double d = kernels::dot(a, b);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * sm.n);
}
BENCHMARK(bm_dot_parallel);

void bm_dot_serial(benchmark::State& state) {
  const SystemMatrices& sm = system_16();
  const VectorXd a = random_vector(sm.n, 11);
  const VectorXd b = random_vector(sm.n, 13);
  for (auto _ : state) {
    double d = ref::dot(a, b);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * sm.n);
}
BENCHMARK(bm_dot_serial);

void bm_assemble_parallel(benchmark::State& state) {
  const Grid grid = build_grid({12, 12, 12});
  const DofMap map = build_dof_map(grid, FieldKind::Tensor, Constraint::TangentialZero);
  const Eigen::MatrixXd weight = Eigen::MatrixXd::Identity(9, 9);
  for (auto _ : state) {
    Csr G = assemble_gram(grid, map, Primitive::Curl, weight, /*serial=*/false);
    benchmark::DoNotOptimize(G.val.data());
  }
}
BENCHMARK(bm_assemble_parallel);

void bm_assemble_serial(benchmark::State& state) {
  const Grid grid = build_grid({12, 12, 12});
  const DofMap map = build_dof_map(grid, FieldKind::Tensor, Constraint::TangentialZero);
  const Eigen::MatrixXd weight = Eigen::MatrixXd::Identity(9, 9);
  for (auto _ : state) {
    Csr G = assemble_gram(grid, map, Primitive::Curl, weight, /*serial=*/true);
    benchmark::DoNotOptimize(G.val.data());
  }
}
BENCHMARK(bm_assemble_serial);

}  // namespace

BENCHMARK_MAIN();
