#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "speechgen/corpus.hpp"
#include "speechgen/postag.hpp"
#include "speechgen/topicmodel.hpp"

namespace speechgen {

// Set of tag sequences seen in a reference corpus.
class PosIndex {
 public:
  static PosIndex build(const TaggedCorpus& tagged);

  bool contains(std::span<const PosTag> tags) const;
  std::size_t size() const { return sequences_.size(); }

  // One space-separated tag sequence per line, sorted.
  void save(std::ostream& out) const;
  static PosIndex load(std::istream& in);

 private:
  std::unordered_set<std::string> sequences_;
};

std::string tag_sequence_key(std::span<const PosTag> tags);

// Sentences of a marked token stream. A trailing run of words without a
// stop marker counts as a sentence.
std::vector<std::vector<std::string>> split_sentences(std::span<const std::string> tokens,
                                                      const Markers& markers = {});

struct GrammarResult {
  double score = 0.0;
  std::size_t matched = 0;
  std::size_t total = 0;
  std::vector<std::string> unmatched;  // sentence text
};

// Throws ValidationError when the token stream holds no sentence.
GrammarResult grammar_eval(std::span<const std::string> tokens, const Tagger& tagger, const PosIndex& index,
                           const Markers& markers = {});

struct ContentResult {
  double score = 0.0;
  std::string best_matching_speech;  // empty when nothing matched
  double self_score = 0.0;           // sum of the speech's own coverage values
  std::vector<TopicWeight> topics;   // ordering of the evaluated speech
};

struct ContentOptions {
  // Divide the score by the evaluated speech's self score.
  bool normalize_by_self_score = false;
};

// Compares the coverage ordering of the speech with that of every class
// speech and keeps the best positional agreement. Ties prefer an exact
// token-level copy, then the smaller id.
ContentResult content_eval(std::span<const std::string> tokens, const TopicIndex& topics,
                           const ContentOptions& options = {});

struct AutoEvalReport {
  std::string speech_id;
  GrammarResult grammar;
  ContentResult content;

  double mean() const { return (grammar.score + content.score) / 2.0; }
  std::string to_json(const TopicIndex* topics = nullptr) const;
};

// Header plus one row per report, with an average row when there are
// several.
std::string render_auto_table(std::span<const AutoEvalReport> reports);

inline constexpr std::array<const char*, 4> kManualCriteria = {
    "Grammatical correctness", "Sentence transitions", "Speech structure", "Speech content"};

struct ManualScoreCard {
  std::string speech_id;
  std::array<int, 4> scores{};  // ordered like kManualCriteria, each 0..3
  std::string rater;

  int total() const { return scores[0] + scores[1] + scores[2] + scores[3]; }
  // Throws ValidationError when a score is outside 0..3.
  void validate() const;
};

// JSON lines with keys speech_id, grammatical_correctness,
// sentence_transitions, speech_structure, speech_content and optional rater.
std::vector<ManualScoreCard> read_score_cards(std::istream& in);
void write_score_cards(std::ostream& out, std::span<const ManualScoreCard> cards);

struct ManualSummary {
  std::vector<ManualScoreCard> cards;
  std::array<double, 4> criterion_means{};
  double mean_total = 0.0;
};

// Throws ValidationError on an empty list or an out-of-range score.
ManualSummary aggregate_manual(std::span<const ManualScoreCard> cards);
std::string render_manual_table(const ManualSummary& summary);

}  // namespace speechgen
