#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "curlgs/transforms.hpp"

namespace {

using namespace curlgs;

void BM_Synthesize(benchmark::State& state) {
  const double pi = std::numbers::pi;
  ModeBasis basis = enumerate_modes(BoxDomain(pi, pi, pi), state.range(0));
  StateVector coeffs = StateVector::zero(basis);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  for (Eigen::Index i = 0; i < coeffs.divfree.size(); ++i) coeffs.divfree[i] = dist(rng);
  const GridSpec grid = default_grid(basis, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize(coeffs, basis, grid));
  }
}
BENCHMARK(BM_Synthesize)->Arg(7)->Arg(13);

void BM_Project(benchmark::State& state) {
  const double pi = std::numbers::pi;
  ModeBasis basis = enumerate_modes(BoxDomain(pi, pi, pi), state.range(0));
  StateVector coeffs = StateVector::zero(basis);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  for (Eigen::Index i = 0; i < coeffs.divfree.size(); ++i) coeffs.divfree[i] = dist(rng);
  const GridSpec grid = default_grid(basis, 4.0);
  const GridField field = synthesize(coeffs, basis, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(field, basis));
  }
}
BENCHMARK(BM_Project)->Arg(7)->Arg(13);

}  // namespace
