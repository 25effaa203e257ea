#include <benchmark/benchmark.h>

#include <speechgen/random.hpp>

#include "synthetic.hpp"

namespace bench {

namespace {

const char* kPhrases[] = {
    "the middle class", "health care", "tax relief", "border security", "small businesses",
    "the american people", "this bill", "federal spending", "clean water", "student loans",
    "social security", "the republican budget", "national defense", "minimum wage", "energy policy"};
const char* kFrames[] = {
    "mr. speaker , i rise today to talk about %",
    "we must protect % for our families",
    "this legislation is about %",
    "i urge my colleagues to support %",
    "the other side ignores %",
    "our constituents care about % and %",
    "we cannot afford to cut %",
    "i yield back the balance of my time"};

}  // namespace

speechgen::Corpus synthetic_corpus(std::size_t per_class, std::uint64_t seed) {
  speechgen::Rng rng(seed);
  const speechgen::Markers mk;
  std::vector<speechgen::TokenizedSpeech> speeches;
  for (const auto& cls : speechgen::kAllClasses) {
    for (std::size_t n = 0; n < per_class; ++n) {
      std::string text;
      const std::size_t sentences = 4 + rng.below(12);
      for (std::size_t s = 0; s < sentences; ++s) {
        std::string frame = kFrames[rng.below(std::size(kFrames))];
        for (auto pos = frame.find('%'); pos != std::string::npos; pos = frame.find('%')) {
          frame.replace(pos, 1, kPhrases[rng.below(std::size(kPhrases))]);
        }
        text += frame + " . ";
      }
      auto sp = speechgen::preprocess({cls.code() + "_" + std::to_string(n), cls, text});
      if (sp) speeches.push_back(std::move(*sp));
    }
  }
  return speechgen::Corpus::build(std::move(speeches));
}

const speechgen::LexiconTagger& tagger() {
  static const speechgen::LexiconTagger t(speechgen::load_lexicon_dir(SPEECHGEN_BENCH_LEXICON_DIR));
  return t;
}

}  // namespace bench

BENCHMARK_MAIN();
