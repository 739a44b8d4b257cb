#include <benchmark/benchmark.h>

#include "symcone/barrier.hpp"
#include "symcone/decompose.hpp"
#include "symcone/ipm.hpp"
#include "symcone/sampling.hpp"
#include "symcone/verification.hpp"

namespace {

using namespace symcone;

void BM_SpectralSymPsd(benchmark::State& state) {
  const Algebra a = Algebra::sym_psd(static_cast<int>(state.range(0)));
  Rng rng(1);
  const Element x = random_element(a, rng);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decompose(x));
}
BENCHMARK(BM_SpectralSymPsd)->Arg(3)->Arg(8)->Arg(16);

void BM_QuadraticRepresentation(benchmark::State& state) {
  const Algebra a = Algebra::sym_psd(static_cast<int>(state.range(0)));
  Rng rng(2);
  const Element x = random_element(a, rng);
  for (auto _ : state) benchmark::DoNotOptimize(quadratic_representation(x));
}
BENCHMARK(BM_QuadraticRepresentation)->Arg(3)->Arg(8);

void BM_ScalingPoint(benchmark::State& state) {
  const Algebra a = Algebra::direct_sum(
      {Algebra::sym_psd(static_cast<int>(state.range(0))), Algebra::lorentz(8), Algebra::orthant(8)});
  const SelfScaledBarrier b(a, {2.0});
  Rng rng(3);
  const Element x = random_interior(a, rng), s = random_interior(a, rng);
  for (auto _ : state) benchmark::DoNotOptimize(b.scaling_point(x, s));
}
BENCHMARK(BM_ScalingPoint)->Arg(4)->Arg(10);

void BM_VerifySuite(benchmark::State& state) {
  const SelfScaledBarrier b(Algebra::direct_sum({Algebra::lorentz(4), Algebra::sym_psd(3)}), {1.0, 2.0});
  VerifyOptions opts;
  opts.trials = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_self_scaled(b, opts));
}
BENCHMARK(BM_VerifySuite)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SplitScrambled(benchmark::State& state) {
  const StructureTensor t =
      structure_constants(Algebra::direct_sum({Algebra::lorentz(3), Algebra::sym_psd(2), Algebra::orthant(2)}));
  const Scrambled s = scramble(t, 4);
  for (auto _ : state) benchmark::DoNotOptimize(split_irreducible(s.tensor));
}
BENCHMARK(BM_SplitScrambled)->Unit(benchmark::kMillisecond);

void BM_SolveRandomSdp(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Algebra a = Algebra::sym_psd(k);
  Rng rng(5);
  Eigen::MatrixXd l(a.dim(), a.dim() / 2);
  for (Eigen::Index j = 0; j < l.cols(); ++j) l.col(j) = random_gaussian(a.dim(), rng);
  const ConicProblem p =
      build_problem(a, SelfScaledBarrier::standard(a), l, random_interior(a, rng), random_interior(a, rng));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolveRandomSdp)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
