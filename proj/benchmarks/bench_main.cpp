#include <benchmark/benchmark.h>

#include "lidskii/eig_orbit.hpp"
#include "lidskii/frames.hpp"
#include "lidskii/majorization.hpp"
#include "lidskii/samplers.hpp"
#include "lidskii/sv_orbit.hpp"

using namespace lidskii;

namespace {

void BM_Eigh(benchmark::State& state) {
  Rng rng(1);
  const HermitianMatrix m = random_hermitian(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(m));
}
BENCHMARK(BM_Eigh)->DenseRange(2, 8, 3)->Arg(32);

void BM_LidskiiCheck(benchmark::State& state) {
  Rng rng(2);
  const HermitianMatrix a = random_hermitian(state.range(0), rng);
  const HermitianMatrix b = random_hermitian(state.range(0), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(majorizes(eigenvalues(a - b).values(),
                                       sort_desc(eigenvalues(a).values() - eigenvalues(b).values()).values()));
  }
}
BENCHMARK(BM_LidskiiCheck)->DenseRange(2, 8, 3);

void BM_CertifyEigMisaligned(benchmark::State& state) {
  Rng rng(3);
  const auto p = samplers::commuting_pair(state.range(0), false, rng);
  const NormSpec n = NormSpec::schatten(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(certify_local_eig(n, p.s, p.g0));
}
BENCHMARK(BM_CertifyEigMisaligned)->DenseRange(2, 6, 2);

void BM_JointSvd(benchmark::State& state) {
  Rng rng(4);
  const auto p = samplers::hypothesis_pair(state.range(0), true, rng);
  for (auto _ : state) benchmark::DoNotOptimize(joint_svd(p.a, p.b));
}
BENCHMARK(BM_JointSvd)->DenseRange(2, 6, 2);

void BM_CommutantTest(benchmark::State& state) {
  Rng rng(5);
  const HermitianMatrix s = random_hermitian(state.range(0), rng);
  const HermitianMatrix g = random_hermitian(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(commutant_is_trivial(s, g));
}
BENCHMARK(BM_CommutantTest)->DenseRange(2, 6, 2);

void BM_PiSubmersion(benchmark::State& state) {
  Rng rng(6);
  const Matrix a = random_gaussian(state.range(0), state.range(0), rng);
  const Matrix b = random_gaussian(state.range(0), state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(pi_submersion_test(a, b));
}
BENCHMARK(BM_PiSubmersion)->DenseRange(2, 6, 2);

void BM_WaterFill(benchmark::State& state) {
  Rng rng(7);
  const SpectrumVector lam = samplers::random_spectrum(state.range(0), rng, 0.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(water_fill(lam, 2.5));
}
BENCHMARK(BM_WaterFill)->Arg(4)->Arg(64)->Arg(1024);

void BM_FodDescent(benchmark::State& state) {
  Rng rng(8);
  const Index d = state.range(0);
  const HermitianMatrix s = samplers::random_psd_trace(d, 3.0, rng);
  const RealVector a = RealVector::Constant(d + 2, 0.7);
  FodOptions opts;
  opts.trace_stride = 1000;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fod_descent(s, a, seed++, opts));
}
BENCHMARK(BM_FodDescent)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_StructureCheck(benchmark::State& state) {
  Rng rng(9);
  const Index d = state.range(0);
  const HermitianMatrix s = samplers::random_psd_trace(d, 3.0, rng);
  const auto r = fod_descent(s, RealVector::Constant(d + 2, 0.7), 1);
  for (auto _ : state) benchmark::DoNotOptimize(structure_check_local(NormSpec::frobenius(), s, r.frame));
}
BENCHMARK(BM_StructureCheck)->DenseRange(2, 4, 1);

}  // namespace

BENCHMARK_MAIN();
