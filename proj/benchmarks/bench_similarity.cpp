#include <benchmark/benchmark.h>

#include <speechgen/generator.hpp>

#include "synthetic.hpp"

using namespace speechgen;

static void BM_SentenceSimilarity(benchmark::State& state) {
  const Corpus corpus = bench::synthetic_corpus(20);
  const TaggedCorpus tagged = tag_corpus(corpus, bench::tagger());
  std::vector<TaggedSentence> pool;
  for (std::size_t i = 0; i < tagged.speech_count(); ++i) {
    for (const auto& s : tagged.sentences(i)) pool.push_back(s);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = pool[i % pool.size()];
    const auto& b = pool[(i * 7 + 3) % pool.size()];
    benchmark::DoNotOptimize(sentence_similarity(a, b, 0.5));
    ++i;
  }
}
BENCHMARK(BM_SentenceSimilarity);
