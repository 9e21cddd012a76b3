#include <benchmark/benchmark.h>

#include <random>

#include "cyclerw/nonterm.hpp"
#include "cyclerw/search.hpp"
#include "cyclerw/tpdb.hpp"
#include "cyclerw/transform.hpp"

using namespace cyclerw;

namespace {

const char* kCounter = "(RULES 0 P -> 1 P, 1 P -> c P, 0 c -> 1 0, 1 c -> c 0, P 0 -> P 1 0 0)";
const char* kPhi2 =
    "(RULES R E -> L E, a L -> L a', b L -> L b', c L -> L c', R a' -> a R, R b' -> b R,"
    " R c' -> c R, a b L -> b a a R, c b L -> b b c R)";

Word random_word(std::size_t n, std::uint32_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Word w(n);
  for (auto& s : w) s = Symbol{static_cast<std::uint32_t>(rng() % k)};
  return w;
}

void BM_CanonicalRotation(benchmark::State& st) {
  const Word w = random_word(static_cast<std::size_t>(st.range(0)), 2, 1);
  for (auto _ : st) benchmark::DoNotOptimize(canonical_rotation(w));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_CanonicalRotation)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oN);

void BM_CycleSuccessors(benchmark::State& st) {
  const Srs P = parse_tpdb(kCounter).srs;
  const Word w = random_word(static_cast<std::size_t>(st.range(0)), 4, 2);
  for (auto _ : st) benchmark::DoNotOptimize(cycle_successors(P, w));
}
BENCHMARK(BM_CycleSuccessors)->Arg(8)->Arg(64)->Arg(512);

void BM_InterpretTropical(benchmark::State& st) {
  Interpretation I(SemiringKind::Tropical, 3);
  I.set(Symbol{0}, Matrix(3, {0, 1, Value::pos_inf(), 2, 0, 1, 1, 1, 0}));
  I.set(Symbol{1}, Matrix(3, {1, 0, 0, Value::pos_inf(), 2, 0, 0, 3, 1}));
  const Word w = random_word(static_cast<std::size_t>(st.range(0)), 2, 3);
  for (auto _ : st) benchmark::DoNotOptimize(trace(SemiringKind::Tropical, interpret(I, w)));
}
BENCHMARK(BM_InterpretTropical)->Arg(16)->Arg(256);

void BM_InterpretNaturalGrowing(benchmark::State& st) {
  // Entries grow exponentially and leave the machine word range.
  Interpretation I(SemiringKind::Natural, 2);
  I.set(Symbol{0}, Matrix(2, {2, 1, 1, 1}));
  const Word w(static_cast<std::size_t>(st.range(0)), Symbol{0});
  for (auto _ : st) benchmark::DoNotOptimize(interpret(I, w));
}
BENCHMARK(BM_InterpretNaturalGrowing)->Arg(32)->Arg(256);

void BM_FindInterpretationCounterFirstStep(benchmark::State& st) {
  const Srs P = parse_tpdb(kCounter).srs;
  SearchConfig cfg;
  cfg.kind = SemiringKind::Tropical;
  cfg.dim = 2;
  cfg.coeff_bound = 1;
  cfg.budget = std::chrono::seconds(30);
  for (auto _ : st) benchmark::DoNotOptimize(find_interpretation(P, cfg));
}
BENCHMARK(BM_FindInterpretationCounterFirstStep)->Unit(benchmark::kMillisecond);

void BM_RemovalLoopCounter(benchmark::State& st) {
  const Srs P = parse_tpdb(kCounter).srs;
  for (auto _ : st) benchmark::DoNotOptimize(removal_loop(P, default_schedule()));
}
BENCHMARK(BM_RemovalLoopCounter)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_FindLoopKiller(benchmark::State& st) {
  const Srs P = parse_tpdb("(RULES a a -> b c, b b -> a c, c c -> a b)").srs;
  for (auto _ : st) benchmark::DoNotOptimize(find_cycle_loop(P, NontermConfig{}));
}
BENCHMARK(BM_FindLoopKiller)->Unit(benchmark::kMicrosecond);

void BM_NontermExhaustAaAba(benchmark::State& st) {
  const Srs P = parse_tpdb("(RULES a a -> a b a)").srs;
  for (auto _ : st) benchmark::DoNotOptimize(find_loop(P, NontermConfig{}));
}
BENCHMARK(BM_NontermExhaustAaAba)->Unit(benchmark::kMillisecond);

void BM_TransformPhi2(benchmark::State& st) {
  const Srs P = parse_tpdb(kPhi2).srs;
  const auto kind = static_cast<TransformKind>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(transform(kind, P));
  st.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_TransformPhi2)->DenseRange(0, 2);

void BM_ParsePrintTpdb(benchmark::State& st) {
  const std::string text = kPhi2;
  for (auto _ : st) benchmark::DoNotOptimize(print_tpdb(parse_tpdb(text).srs));
}
BENCHMARK(BM_ParsePrintTpdb);

}  // namespace
BENCHMARK_MAIN();
