#include <benchmark/benchmark.h>

#include <speechgen/langmodel.hpp>
#include <speechgen/topicmodel.hpp>

#include "synthetic.hpp"

using namespace speechgen;

static void BM_TrainLanguageModel(benchmark::State& state) {
  const Corpus corpus = bench::synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(NGramModel::train(corpus, kAllClasses[0]));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.class_members(kAllClasses[0]).size()));
}
BENCHMARK(BM_TrainLanguageModel)->Arg(50)->Arg(400);

static void BM_TagCorpus(benchmark::State& state) {
  const Corpus corpus = bench::synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tag_corpus(corpus, bench::tagger()));
}
BENCHMARK(BM_TagCorpus)->Arg(50)->Arg(400);

static void BM_ExtractTerms(benchmark::State& state) {
  const Corpus corpus = bench::synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  const TaggedCorpus tagged = tag_corpus(corpus, bench::tagger());
  for (auto _ : state) benchmark::DoNotOptimize(extract_terms(corpus, tagged, {.min_corpus_count = 5}));
}
BENCHMARK(BM_ExtractTerms)->Arg(50)->Arg(400);
