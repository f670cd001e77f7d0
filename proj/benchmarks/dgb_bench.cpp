#include <benchmark/benchmark.h>

#include "dgb/backbone.hpp"
#include "dgb/chart.hpp"
#include "dgb/fstruct.hpp"
#include "dgb/oracle.hpp"

namespace {

const dgb::Grammar& grammar() {
  static const dgb::Grammar g = dgb::load_grammar_file(DGB_GRAMMAR);
  return g;
}

void BM_LoadAndCompile(benchmark::State& state) {
  for (auto _ : state) {
    dgb::Engine e(grammar());
    benchmark::DoNotOptimize(e.backbone().rules.size());
  }
}
BENCHMARK(BM_LoadAndCompile);

void BM_ParseExample(benchmark::State& state) {
  dgb::Engine e(grammar(), {.max_unpack = 1000, .specialize = state.range(0) != 0});
  auto tokens = dgb::tokenize("den Mann hat der Junge gesehen .");
  for (auto _ : state) benchmark::DoNotOptimize(e.analyses(tokens));
}
BENCHMARK(BM_ParseExample)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_ParseTwoAuxiliaries(benchmark::State& state) {
  dgb::Engine e(grammar());
  auto tokens = dgb::tokenize("den Mann will der Junge gesehen haben .");
  for (auto _ : state) benchmark::DoNotOptimize(e.analyses(tokens));
}
BENCHMARK(BM_ParseTwoAuxiliaries)->Unit(benchmark::kMillisecond);

void BM_Linearize(benchmark::State& state) {
  dgb::Engine e(grammar());
  auto a = e.analyses(std::string_view("den Mann hat der Junge gesehen ."));
  for (auto _ : state) benchmark::DoNotOptimize(dgb::enumerate_linearizations(a.at(0).deps, grammar()));
}
BENCHMARK(BM_Linearize)->Unit(benchmark::kMillisecond);

void BM_CrossValidate(benchmark::State& state) {
  dgb::Engine e(grammar());
  auto words = dgb::tokenize("den Mann hat der Junge gesehen .");
  for (auto _ : state) benchmark::DoNotOptimize(dgb::cross_validate(words, e));
}
BENCHMARK(BM_CrossValidate)->Unit(benchmark::kSecond)->Iterations(1);

void BM_Unify(benchmark::State& state) {
  auto a = dgb::FStructure::from_avm("[SUBJ <1>[CASE nom SPEC [LEXEME der]] XSUBJ <1> VPART [OBJ [CASE acc]]]");
  auto b = dgb::FStructure::from_avm("[SUBJ [NUM sg] VPART [OBJ [LEXEME mann SPEC [CASE acc]]]]");
  for (auto _ : state) benchmark::DoNotOptimize(dgb::unify(a, b));
}
BENCHMARK(BM_Unify);

void BM_ResolveUncertainty(benchmark::State& state) {
  auto f = dgb::FStructure::from_avm(
      "[SUBJ [LEXEME junge] VPART [VPART [VPART [OBJ [LEXEME mann] SUBJ [LEXEME x]] OBJ [LEXEME y]]]]");
  auto r = dgb::RegPath::parse("{SUBJ|OBJ|VPART}* OBJ");
  for (auto _ : state) benchmark::DoNotOptimize(dgb::resolve_uncertainty(f, f.root(), r));
}
BENCHMARK(BM_ResolveUncertainty);

}  // namespace

BENCHMARK_MAIN();
