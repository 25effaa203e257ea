#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "speechgen/corpus.hpp"
#include "speechgen/postag.hpp"
#include "speechgen/speech_class.hpp"

namespace speechgen {

using PosPattern = std::vector<CoarseClass>;

// Justeson & Katz two- and three-word patterns plus Noun-Conjunction-Noun.
const std::vector<PosPattern>& term_patterns();
bool matches_term_pattern(std::span<const PosTag> tags);

using Term = std::vector<std::string>;

std::string join_term(std::span<const std::string> words);

struct TopicTerm {
  Term words;
  SpeechClass cls;
  std::uint64_t corpus_count = 0;
  std::uint64_t class_count = 0;
  double significance = 0.0;

  std::string text() const { return join_term(words); }
};

// Terms ordered by significance descending, then by words ascending.
struct TopicCatalog {
  SpeechClass cls;
  std::vector<TopicTerm> terms;
};

struct ExtractionOptions {
  std::uint64_t min_corpus_count = 20;
  double min_significance = 1.0;  // exclusive
};

struct TermCounts {
  Term words;
  std::array<std::uint64_t, kClassCount> per_class{};
  std::uint64_t total() const;
};

struct TopicExtraction {
  std::array<TopicCatalog, kClassCount> catalogs;
  // Matched-term occurrences per class and overall; the event space of Z.
  std::array<std::uint64_t, kClassCount> class_occurrences{};
  std::uint64_t corpus_occurrences = 0;
  // Every pattern-matching term before filtering, sorted by words.
  std::vector<TermCounts> candidates;
};

// Slides 2- and 3-token windows over every tagged sentence and keeps the
// windows whose coarse tag sequence is a term pattern.
TopicExtraction extract_terms(const Corpus& corpus, const TaggedCorpus& tagged,
                              const ExtractionOptions& options = {});

// Z = (class_count / class_size) / (corpus_count / corpus_size). Throws
// ValidationError when corpus_count or a size is zero.
double significance(std::uint64_t class_count, std::uint64_t class_size, std::uint64_t corpus_count,
                    std::uint64_t corpus_size);

// Overlapping occurrences of `needle` in `haystack`.
std::size_t count_occurrences(std::span<const std::string> haystack, std::span<const std::string> needle);

void write_catalog(std::ostream& out, const TopicCatalog& catalog);
TopicCatalog read_catalog(std::istream& in, SpeechClass expected);

// Side-by-side top-N columns in RY, RN, DY, DN order with totals.
std::string render_topics_table(std::span<const TopicCatalog> catalogs, std::size_t top = 10);

struct TopicWeight {
  std::size_t term = 0;  // index into the catalog
  double coverage = 0.0;
  double probability = 0.0;
};

// Catalog of one class bound to that class's speeches. Answers topic
// coverage and topic-conditional word probability queries. The corpus must
// outlive the index.
class TopicIndex {
 public:
  TopicIndex(const Corpus& corpus, TopicCatalog catalog);

  const TopicCatalog& catalog() const { return catalog_; }
  SpeechClass speech_class() const { return catalog_.cls; }
  std::size_t term_count() const { return catalog_.terms.size(); }
  const TopicTerm& term(std::size_t i) const { return catalog_.terms[i]; }
  std::optional<std::size_t> find_term(std::span<const std::string> words) const;

  // Occurrences of the term in all speeches of the class.
  std::uint64_t class_occurrences(std::size_t term) const { return class_totals_[term]; }

  // Per-term occurrence counts in a token stream.
  std::vector<std::uint32_t> count_terms(std::span<const std::string> tokens) const;

  // TC in [0, 1]; occurrences beyond the class total saturate at 1.
  double coverage(std::uint64_t occurrences, std::size_t term) const;
  double topic_coverage(std::span<const std::string> tokens, std::size_t term) const;

  // All terms with positive coverage, by coverage descending then words
  // ascending, probabilities normalized over the whole list.
  std::vector<TopicWeight> ranked_topics(std::span<const std::string> tokens) const;
  std::vector<TopicWeight> ranked_from_counts(std::span<const std::uint32_t> counts) const;

  // Top-k of ranked_topics, renormalized over the kept terms.
  std::vector<TopicWeight> current_topics(std::span<const std::string> tokens, std::size_t k = 3) const;
  std::vector<TopicWeight> current_from_counts(std::span<const std::uint32_t> counts, std::size_t k = 3) const;

  // Per class speech: sum over t in `topics` of P(t | S', c), where the
  // coverage of each t in S' is normalized over the terms of `topics`.
  std::vector<double> speech_weights(std::span<const TopicWeight> topics) const;

  // Unnormalized P_topic. Empty `topics` gives 0.
  double p_topic(std::string_view word, std::span<const TopicWeight> topics, double epsilon = 1e-3) const;
  std::vector<double> p_topic(std::span<const std::string> words, std::span<const TopicWeight> topics,
                              double epsilon = 1e-3) const;
  // Same, reusing weights from speech_weights().
  std::vector<double> p_topic_weighted(std::span<const std::string> words, std::span<const double> weights,
                                       double epsilon = 1e-3) const;

  // Class speeches in corpus order.
  std::size_t class_speech_count() const { return speeches_.size(); }
  const TokenizedSpeech& class_speech(std::size_t j) const { return *speeches_[j]; }
  std::vector<TopicWeight> ranked_topics_of_class_speech(std::size_t j) const;

 private:
  struct SpeechCounts {
    std::unordered_map<std::string, std::uint32_t> words;
    std::uint64_t length = 0;
  };

  TopicCatalog catalog_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::vector<const TokenizedSpeech*> speeches_;
  std::vector<SpeechCounts> speech_counts_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> occurrences_;  // term -> (speech, count)
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> speech_terms_;  // speech -> (term, count)
  std::vector<std::uint64_t> class_totals_;
};

}  // namespace speechgen
