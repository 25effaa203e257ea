#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "speechgen/corpus.hpp"

namespace speechgen {

// Penn Treebank tagset, including the punctuation tags.
enum class PosTag : std::uint8_t {
  CC, CD, DT, EX, FW, IN, JJ, JJR, JJS, LS, MD, NN, NNS, NNP, NNPS, PDT, POS, PRP, PRPS,
  RB, RBR, RBS, RP, SYM, TO, UH, VB, VBD, VBG, VBN, VBP, VBZ, WDT, WP, WPS, WRB,
  Comma, Period, Colon, LeftParen, RightParen, OpenQuote, CloseQuote, Hash, Dollar,
};

inline constexpr std::size_t kTagCount = static_cast<std::size_t>(PosTag::Dollar) + 1;

// Treebank spelling, e.g. "PRP$" for PosTag::PRPS and "," for Comma.
std::string_view tag_name(PosTag tag);
std::optional<PosTag> parse_tag(std::string_view name);
std::span<const PosTag> all_tags();

enum class CoarseClass : std::uint8_t { Noun, Adjective, Preposition, Conjunction, Other };

CoarseClass coarse(PosTag tag);

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<PosTag> tags;

  friend bool operator==(const TaggedSentence&, const TaggedSentence&) = default;
};

// Word -> tag counts. Lookup returns the most frequent tag; ties resolve to
// the tag listed first in the tagset.
class Lexicon {
 public:
  void add(std::string_view word, PosTag tag, std::uint64_t count);

  // Merges a `word tag count` file. Lines starting with '#' that are not a
  // valid entry are comments. Throws FormatError with the line number on
  // malformed entries.
  void load(const std::filesystem::path& path);
  void load(std::istream& in, std::string_view source_name = "<stream>");

  std::optional<PosTag> lookup(std::string_view word) const;
  std::uint64_t count(std::string_view word, PosTag tag) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::vector<std::pair<PosTag, std::uint64_t>> counts;
    PosTag best = PosTag::NN;
  };
  std::unordered_map<std::string, Entry> entries_;
};

// Loads the bundled lexicon files (base + domain supplement) from a
// directory.
Lexicon load_lexicon_dir(const std::filesystem::path& dir);

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<PosTag> tag(std::span<const std::string> tokens) const = 0;

  TaggedSentence tag_sentence(std::span<const std::string> tokens) const {
    return {std::vector<std::string>(tokens.begin(), tokens.end()), tag(tokens)};
  }
};

// Lexicon lookup, then suffix rules, then NN.
class LexiconTagger final : public Tagger {
 public:
  explicit LexiconTagger(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

  std::vector<PosTag> tag(std::span<const std::string> tokens) const override;
  PosTag tag_word(std::string_view word) const;

  // Shape and suffix rules used for out-of-lexicon words.
  static std::optional<PosTag> shape_rule(std::string_view word);
  static std::optional<PosTag> suffix_rule(std::string_view word);

  const Lexicon& lexicon() const { return lexicon_; }

 private:
  Lexicon lexicon_;
};

// Tags for every sentence of every speech, indexed like Corpus::speeches().
class TaggedCorpus {
 public:
  TaggedCorpus() = default;
  explicit TaggedCorpus(std::vector<std::vector<TaggedSentence>> by_speech)
      : by_speech_(std::move(by_speech)) {}

  const std::vector<TaggedSentence>& sentences(std::size_t speech_index) const {
    return by_speech_[speech_index];
  }
  std::size_t speech_count() const { return by_speech_.size(); }
  std::size_t sentence_count() const;

  // Cache lines: `<speech id>\t<sentence index>\t<word_TAG ...>`.
  void write_cache(std::ostream& out, const Corpus& corpus) const;
  static TaggedCorpus read_cache(std::istream& in, const Corpus& corpus);

 private:
  std::vector<std::vector<TaggedSentence>> by_speech_;
};

TaggedCorpus tag_corpus(const Corpus& corpus, const Tagger& tagger);

// Parses one pre-tagged sentence (`word_TAG word_TAG ...`). The tag is the
// text after the last underscore.
TaggedSentence parse_pretagged_line(std::string_view line);
std::string format_pretagged(const TaggedSentence& sentence);

// Reads externally tagged sentences, one per line in corpus order, and
// checks that their words agree with the corpus.
TaggedCorpus load_pretagged(std::istream& in, const Corpus& corpus);

}  // namespace speechgen
