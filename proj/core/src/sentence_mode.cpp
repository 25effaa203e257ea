#include <algorithm>
#include <set>
#include <tuple>

#include "speechgen/error.hpp"
#include "speechgen/generator.hpp"

namespace speechgen {

namespace {

using Trigram = std::tuple<std::string_view, std::string_view, std::string_view>;

std::set<Trigram> trigrams(std::span<const std::string> words) {
  std::set<Trigram> out;
  for (std::size_t i = 0; i + 3 <= words.size(); ++i) out.emplace(words[i], words[i + 1], words[i + 2]);
  return out;
}

}  // namespace

void SentenceSimConfig::validate() const {
  if (!(lambda_sim >= 0.0 && lambda_sim <= 1.0)) throw ValidationError("lambda_sim must lie in [0, 1]");
  if (pool_size < 1) throw ValidationError("pool size must be at least 1");
  if (max_sentences < 1) throw ValidationError("max_sentences must be at least 1");
}

double structural_similarity(std::span<const PosTag> a, std::span<const PosTag> b) {
  if (a.empty() || b.empty()) return 0.0;
  // longest common substring, rolling row
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(best) / static_cast<double>(std::min(a.size(), b.size()));
}

double textual_similarity(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < 3 || b.size() < 3) return 0.0;
  const auto ta = trigrams(a);
  const auto tb = trigrams(b);
  std::size_t shared = 0;
  for (const auto& t : ta) shared += tb.count(t);
  const auto& longer = a.size() >= b.size() ? ta : tb;
  return static_cast<double>(shared) / static_cast<double>(longer.size());
}

double sentence_similarity(const TaggedSentence& a, const TaggedSentence& b, double lambda_sim) {
  return lambda_sim * structural_similarity(a.tags, b.tags) +
         (1.0 - lambda_sim) * textual_similarity(a.tokens, b.tokens);
}

GenerationRecord generate_sentence_based(const Corpus& corpus, const TaggedCorpus& tagged, SpeechClass cls,
                                         const SentenceSimConfig& config, std::uint64_t seed) {
  config.validate();
  if (tagged.speech_count() != corpus.size()) throw ValidationError("tagged corpus does not match the corpus");
  const auto& members = corpus.class_members(cls);
  if (members.empty()) throw ValidationError("no speeches for class " + cls.code());

  const auto& mk = corpus.markers();
  Rng rng(seed);
  GenerationRecord record;
  record.cls = cls;
  record.mode = GenerationMode::SentenceBased;
  record.config.cls = cls;
  record.config.seed = seed;
  record.config.mode = GenerationMode::SentenceBased;
  record.sentence_config = config;
  record.tokens.push_back(mk.start);

  auto emit = [&](std::size_t speech, std::size_t sentence, double similarity, bool fallback) {
    const auto words = corpus.speeches()[speech].sentence_words(sentence);
    record.tokens.insert(record.tokens.end(), words.begin(), words.end());
    record.tokens.push_back(mk.stop);
    record.picks.push_back({corpus.speeches()[speech].id, sentence, similarity, fallback});
  };

  std::size_t cur_speech = members[rng.below(members.size())];
  std::size_t cur_sentence = 0;
  emit(cur_speech, cur_sentence, 0.0, false);

  bool finished = false;
  std::vector<std::size_t> pool(members.begin(), members.end());
  while (record.picks.size() < config.max_sentences) {
    const std::size_t draw = std::min(config.pool_size, pool.size());
    for (std::size_t i = 0; i < draw; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);

    const auto& current = tagged.sentences(cur_speech)[cur_sentence];
    double best_sim = -1.0;
    std::size_t best_speech = 0, best_sentence = 0;
    for (std::size_t i = 0; i < draw; ++i) {
      const auto& sentences = tagged.sentences(pool[i]);
      for (std::size_t k = 0; k < sentences.size(); ++k) {
        const double sim = sentence_similarity(current, sentences[k], config.lambda_sim);
        if (sim > best_sim) {
          best_sim = sim;
          best_speech = pool[i];
          best_sentence = k;
        }
      }
    }

    std::size_t next_speech = cur_speech, next_sentence = cur_sentence + 1;
    bool fallback = true;
    if (best_sim >= config.similarity_threshold) {
      next_speech = best_speech;
      next_sentence = best_sentence + 1;
      fallback = false;
    }
    if (next_sentence >= corpus.speeches()[next_speech].sentences.size()) {
      finished = true;  // successor is the end of a speech
      break;
    }
    emit(next_speech, next_sentence, std::max(best_sim, 0.0), fallback);
    cur_speech = next_speech;
    cur_sentence = next_sentence;
  }
  if (finished) record.tokens.push_back(mk.end);
  else record.truncated = true;
  return record;
}

}  // namespace speechgen
