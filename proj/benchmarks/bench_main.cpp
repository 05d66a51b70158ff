#include <benchmark/benchmark.h>

#include "heisweil/autz.hpp"
#include "heisweil/forms.hpp"
#include "heisweil/reps.hpp"
#include "heisweil/rootdata.hpp"
#include "heisweil/weil.hpp"

namespace {

using namespace heisweil;
using heis::HeisenbergGroup;
using heis::HeisType;

void BM_CountZeros(benchmark::State& state) {
  const auto q = forms::standard_nonsplit(2, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forms::count_zeros(q));
}
BENCHMARK(BM_CountZeros)->DenseRange(2, 8, 2);

void BM_WittIndex(benchmark::State& state) {
  const auto q = forms::standard_nonsplit(2, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forms::witt_index(q));
}
BENCHMARK(BM_WittIndex)->DenseRange(1, 4);

void BM_HeisenbergRep(benchmark::State& state) {
  const auto g = HeisenbergGroup::standard_model(2, static_cast<unsigned>(state.range(0)), HeisType::negative);
  for (auto _ : state) benchmark::DoNotOptimize(reps::heisenberg_rep(g, 1).rep.dim);
}
BENCHMARK(BM_HeisenbergRep)->DenseRange(1, 4);

void BM_FrobeniusSchur(benchmark::State& state) {
  const auto r = reps::heisenberg_rep(HeisenbergGroup::standard_model(2, static_cast<unsigned>(state.range(0)), HeisType::positive), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reps::frobenius_schur(r.rep));
}
BENCHMARK(BM_FrobeniusSchur)->DenseRange(1, 3);

void BM_FullAutomorphismGroup(benchmark::State& state) {
  const auto g = autz::share(HeisenbergGroup::standard_model(2, 2, state.range(0) ? HeisType::negative : HeisType::positive));
  for (auto _ : state) benchmark::DoNotOptimize(autz::full_automorphism_group(g).elements.size());
}
BENCHMARK(BM_FullAutomorphismGroup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExactSequenceReport(benchmark::State& state) {
  const auto g = HeisenbergGroup::standard_model(2, 2, HeisType::negative);
  for (auto _ : state) benchmark::DoNotOptimize(autz::exact_sequence_report(g).splits);
}
BENCHMARK(BM_ExactSequenceReport)->Unit(benchmark::kMillisecond);

void BM_LinearizePolarizationStabilizer(benchmark::State& state) {
  const auto rep = reps::heisenberg_rep(HeisenbergGroup::standard_model(2, 2, HeisType::positive), 1);
  const auto a = weil::polarization_stabilizer(rep);
  for (auto _ : state) {
    const auto pw = weil::projective_weil(rep, a);
    benchmark::DoNotOptimize(weil::linearize(pw).certificate.solvable);
  }
}
BENCHMARK(BM_LinearizePolarizationStabilizer)->Unit(benchmark::kMillisecond);

void BM_GerardinSp2(benchmark::State& state) {
  const auto p = static_cast<std::uint32_t>(state.range(0));
  const gf::FpMatrix s(p, 2, 2, {1, 1, 0, 1}), l(p, 2, 2, {1, 0, 1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(weil::gerardin_weil(p, 1, {s, l}).count);
}
BENCHMARK(BM_GerardinSp2)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_WeylGroup(benchmark::State& state) {
  const auto r = rootdata::make_root_system(state.range(0) ? "F4" : "D4");
  for (auto _ : state) benchmark::DoNotOptimize(rootdata::weyl_group(r).elements.size());
}
BENCHMARK(BM_WeylGroup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_WeylCentralizerF4(benchmark::State& state) {
  const auto r = rootdata::make_root_system("F4");
  const auto w = rootdata::weyl_group(r);
  const rootdata::ResidueFunctional x{3, 2, {{1, 0}, {0, 1}, {1, 1}, {0, 0}}};
  for (auto _ : state) benchmark::DoNotOptimize(rootdata::weyl_centralizer(w, x, {}).quotient_order);
}
BENCHMARK(BM_WeylCentralizerF4)->Unit(benchmark::kMillisecond);

void BM_AppendixD(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rootdata::appendix_d_report().stabilizer_order);
}
BENCHMARK(BM_AppendixD)->Unit(benchmark::kMillisecond);

void BM_CommutatorCheck(benchmark::State& state) {
  const auto q = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rootdata::unipotent_commutator_check(rootdata::MatrixGroupType::sp4, q).holds);
}
BENCHMARK(BM_CommutatorCheck)->Arg(4)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
