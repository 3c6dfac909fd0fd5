#include <benchmark/benchmark.h>

#include "b12scope/classifier.hpp"
#include "b12scope/config.hpp"
#include "b12scope/pipeline.hpp"
#include "b12scope/profiles.hpp"
#include "b12scope/synth.hpp"
#include "b12scope/term_models.hpp"

using namespace b12scope;

namespace {

const PipelineInputs& inputs() {
  static const PipelineInputs in = load_inputs(default_config(B12SCOPE_BENCH_DATA_DIR));
  return in;
}

const SynthWorld& world() {
  static const SynthWorld w = [] {
    SynthConfig c;
    c.n_users = 5000;
    c.seed = 1;
    SynthSection s;
    s.planted_targets = 10;
    s.planted_controls = 10;
    s.target_effect = -0.002;
    c.terms = planted_terms(s, inputs().targets, inputs().controls);
    return generate(c, {&inputs().corpus, &inputs().zips, &inputs().nutrients, &inputs().references});
  }();
  return w;
}

TermMatcher all_terms() {
  TermMatcher m;
  m.add(inputs().targets);
  m.add(inputs().controls);
  return m;
}

}  // namespace

static void BM_Classify(benchmark::State& state) {
  const auto terms = all_terms();
  const ClassifierConfig cfg;
  const QueryClassifier c(inputs().corpus, terms, cfg);
  const auto& records = world().records;
  for (auto _ : state) benchmark::DoNotOptimize(classify_all(records, c, static_cast<unsigned>(state.range(0))));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * records.size()));
}
BENCHMARK(BM_Classify)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_BuildProfiles(benchmark::State& state) {
  const auto terms = all_terms();
  const ClassifierConfig cfg;
  const QueryClassifier c(inputs().corpus, terms, cfg);
  const auto classified = classify_all(world().records, c, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_profiles(classified, inputs().zips));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * classified.size()));
}
BENCHMARK(BM_BuildProfiles)->Unit(benchmark::kMillisecond);

static void BM_FitAllTerms(benchmark::State& state) {
  const auto terms = all_terms();
  const ClassifierConfig cfg;
  const QueryClassifier c(inputs().corpus, terms, cfg);
  const auto store = build_profiles(classify_all(world().records, c, 1), inputs().zips);
  std::vector<TermSelection> selected;
  for (const auto* lex : {&inputs().targets, &inputs().controls}) {
    for (const auto& t : select_modeled_terms(store, *lex, 20)) selected.push_back(t);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_all_terms(store, selected, inputs().nutrients, {}));
  state.counters["terms"] = static_cast<double>(selected.size());
}
BENCHMARK(BM_FitAllTerms)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
