#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "speechgen/corpus.hpp"
#include "speechgen/langmodel.hpp"
#include "speechgen/postag.hpp"
#include "speechgen/random.hpp"
#include "speechgen/topicmodel.hpp"

namespace speechgen {

enum class GenerationMode : std::uint8_t { WordBased, SentenceBased };

std::string_view mode_name(GenerationMode mode);
std::optional<GenerationMode> parse_mode(std::string_view name);

struct GenerationConfig {
  SpeechClass cls;
  double lambda = 0.5;    // weight of the language model in the blend
  double epsilon = 1e-3;  // added to the P_topic denominator
  std::size_t word_limit = 400;
  std::size_t top_k_topics = 3;
  std::uint64_t seed = 0;
  GenerationMode mode = GenerationMode::WordBased;
  bool record_trace = true;

  // Throws ValidationError unless 0 <= lambda <= 1, word_limit >= 6 and
  // epsilon > 0.
  void validate() const;
};

struct CandidateScore {
  std::string word;
  double p_language = 0.0;
  double p_topic = 0.0;  // normalized over the candidates
  double combined = 0.0;
  std::uint32_t repetition_count = 0;
  double final_score = 0.0;   // combined / (1 + r^2)
  double probability = 0.0;   // final_score normalized over the candidates
};

struct TopicSnapshot {
  std::string term;
  double coverage = 0.0;
  double probability = 0.0;
};

struct StepTrace {
  std::vector<std::string> context;
  std::vector<TopicSnapshot> topics;
  std::vector<CandidateScore> candidates;
  std::string chosen;
  bool uniform_fallback = false;
};

struct SentenceSimConfig {
  double lambda_sim = 0.5;
  std::size_t pool_size = 20;
  double similarity_threshold = 0.3;
  std::size_t max_sentences = 40;

  void validate() const;
};

struct SentencePick {
  std::string source_speech;
  std::size_t sentence = 0;
  double similarity = 0.0;  // best similarity in the pool; 0 for the opener
  bool fallback = false;    // successor of the previous sentence was used
};

struct GenerationRecord {
  SpeechClass cls;
  GenerationMode mode = GenerationMode::WordBased;
  GenerationConfig config;
  std::optional<SentenceSimConfig> sentence_config;
  std::vector<std::string> tokens;
  bool truncated = false;
  std::vector<StepTrace> steps;         // word mode
  std::vector<SentencePick> picks;      // sentence mode

  std::string rendered_text(const Markers& markers = {}) const { return render(tokens, markers); }
};

// Incremental state of one word-based generation.
class GenerationState {
 public:
  GenerationState(const TopicIndex& topics, std::span<const std::string> opener);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::span<const std::string> context() const;
  const std::vector<std::uint32_t>& term_counts() const { return term_counts_; }

  // Occurrences of (context + word) as a 6-gram in the tokens so far.
  std::uint32_t repetitions(const std::string& word) const;

  void push(std::string token);

 private:
  const TopicIndex* topics_;
  std::vector<std::string> tokens_;
  std::vector<std::uint32_t> term_counts_;
  std::unordered_map<std::string, std::uint32_t> six_grams_;
};

// Word-based generator over the models of one class. Keeps a cache of
// per-speech topic weights, so one instance serves one thread.
class WordGenerator {
 public:
  WordGenerator(const NGramModel& language_model, const TopicIndex& topics, const Markers& markers = {});

  // Candidate scores for the next token, or nullopt when the context was
  // never seen in training.
  std::optional<StepTrace> score_step(const GenerationState& state, const GenerationConfig& config) const;

  // Scores, samples and appends one token. Returns nullopt at a dead end.
  std::optional<std::string> step(GenerationState& state, const GenerationConfig& config, Rng& rng,
                                  StepTrace* trace = nullptr) const;

  GenerationRecord generate(const GenerationConfig& config) const;

 private:
  const NGramModel* lm_;
  const TopicIndex* topics_;
  Markers markers_;
  mutable std::map<std::vector<std::size_t>, std::vector<double>> weight_cache_;
};

// Structural similarity: longest common run of tags over the shorter length.
double structural_similarity(std::span<const PosTag> a, std::span<const PosTag> b);
// Shared distinct trigrams over the distinct trigrams of the longer
// sentence; 0 when either sentence has fewer than three tokens.
double textual_similarity(std::span<const std::string> a, std::span<const std::string> b);
double sentence_similarity(const TaggedSentence& a, const TaggedSentence& b, double lambda_sim);

// Sentence-stitching generator.
GenerationRecord generate_sentence_based(const Corpus& corpus, const TaggedCorpus& tagged, SpeechClass cls,
                                         const SentenceSimConfig& config, std::uint64_t seed);

// GenerationRecord <-> JSON document.
std::string record_to_json(const GenerationRecord& record, bool with_trace, const Markers& markers = {});
GenerationRecord record_from_json(std::string_view text);

}  // namespace speechgen
