#include <benchmark/benchmark.h>

#include <speechgen/generator.hpp>

#include "synthetic.hpp"

using namespace speechgen;

namespace {

struct Trained {
  Corpus corpus = bench::synthetic_corpus(200);
  TaggedCorpus tagged = tag_corpus(corpus, bench::tagger());
  TopicCatalog catalog = extract_terms(corpus, tagged, {.min_corpus_count = 5}).catalogs[3];
  NGramModel lm = NGramModel::train(corpus, kAllClasses[3]);
  TopicIndex topics{corpus, catalog};
};

const Trained& trained() {
  static const Trained t;
  return t;
}

}  // namespace

static void BM_GenerateWordBased(benchmark::State& state) {
  const auto& t = trained();
  const WordGenerator gen(t.lm, t.topics);
  GenerationConfig cfg;
  cfg.cls = kAllClasses[3];
  cfg.record_trace = state.range(0) != 0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(gen.generate(cfg));
  }
}
BENCHMARK(BM_GenerateWordBased)->Arg(0)->Arg(1);

static void BM_GenerateSentenceBased(benchmark::State& state) {
  const auto& t = trained();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_sentence_based(t.corpus, t.tagged, kAllClasses[3], {}, seed++));
}
BENCHMARK(BM_GenerateSentenceBased);
