#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "speechgen/speech_class.hpp"

namespace speechgen {

// Reserved token spellings. Markers never occur as ordinary words.
struct Markers {
  std::string start = "__START__";
  std::string stop = "__STOP__";
  std::string end = "__END__";

  bool is_marker(std::string_view token) const {
    return token == start || token == stop || token == end;
  }
};

struct RawSpeech {
  std::string id;
  SpeechClass cls;
  std::string text;
};

// Labels a file by matching its filename against a regular expression with
// named groups `party` and `vote`. Both `(?P<name>...)` and `(?<name>...)`
// spellings are accepted.
struct FilenameRule {
  std::string pattern;
};

// CSV with header `path,party,vote`; paths are relative to the manifest.
struct ManifestRule {
  std::filesystem::path manifest;
};

using LabelingRule = std::variant<FilenameRule, ManifestRule>;

// Filename scheme of the Convote distribution: `###_######_#######_PMV.txt`
// with P the party letter, M the mention flag and V the vote letter.
FilenameRule convote_filename_rule();

struct IngestResult {
  std::vector<RawSpeech> speeches;  // sorted by id
  std::vector<std::string> skipped;  // files no rule could label
};

// Reads every `.txt` file below `source` (recursively) when `source` is a
// directory. With a ManifestRule `source` is ignored and the manifest lists
// the files. Ids are paths relative to the scanned root without extension.
IngestResult ingest(const std::filesystem::path& source, const LabelingRule& rule);

// Token index range [begin, end) of one sentence; tokens[end - 1] is the
// stop marker.
struct SentenceRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t word_count() const { return end - begin - 1; }
  friend bool operator==(const SentenceRange&, const SentenceRange&) = default;
};

struct TokenizedSpeech {
  std::string id;
  SpeechClass cls;
  std::vector<std::string> tokens;
  std::vector<SentenceRange> sentences;

  // Words of sentence `i` without the trailing stop marker.
  std::span<const std::string> sentence_words(std::size_t i) const {
    const auto& r = sentences[i];
    return std::span<const std::string>(tokens).subspan(r.begin, r.word_count());
  }
};

struct PreprocessOptions {
  Markers markers;
  // Words whose trailing period belongs to the word. Tokens with an inner
  // period (u.s., h.r.) are treated the same way.
  std::vector<std::string> abbreviations = {
      "mr", "mrs", "ms", "dr", "st", "jr", "sr", "gen", "sen", "rep", "col",
      "lt", "sgt", "capt", "gov", "messrs", "vs", "no", "inc", "co", "corp"};
};

// Lowercases, strips tags, isolates punctuation and splits on whitespace.
// Sentence delimiters stay as `.`, `!` or `?` tokens.
std::vector<std::string> tokenize_text(std::string_view text, const PreprocessOptions& options = {});

// Full cleaning pipeline. Returns nullopt (Removed) when fewer than two
// sentences survive.
std::optional<TokenizedSpeech> preprocess(const RawSpeech& raw,
                                          const PreprocessOptions& options = {});

// Inverse of preprocessing up to normalization: drops start/end markers and
// writes every stop marker as `.`.
std::string render(std::span<const std::string> tokens, const Markers& markers = {});

// Builds a speech from an already marked token stream, validating the
// start/end/stop structure. Throws FormatError on violations.
TokenizedSpeech make_speech(std::string id, SpeechClass cls, std::vector<std::string> tokens,
                            const Markers& markers = {});

// Sentence ranges of a marked token stream. A trailing run of words without
// a stop marker is not a sentence.
std::vector<SentenceRange> sentence_ranges(std::span<const std::string> tokens,
                                           const Markers& markers = {});

// Immutable class-partitioned collection of speeches, ordered by id.
class Corpus {
 public:
  Corpus() = default;

  // Throws ValidationError on duplicate ids.
  static Corpus build(std::vector<TokenizedSpeech> speeches, Markers markers = {});

  std::span<const TokenizedSpeech> speeches() const { return speeches_; }
  const std::vector<std::size_t>& class_members(SpeechClass cls) const {
    return by_class_[cls.index()];
  }
  const TokenizedSpeech* find(std::string_view id) const;
  std::size_t size() const { return speeches_.size(); }
  bool empty() const { return speeches_.empty(); }
  const Markers& markers() const { return markers_; }

 private:
  std::vector<TokenizedSpeech> speeches_;
  std::array<std::vector<std::size_t>, kClassCount> by_class_;
  Markers markers_;
};

struct ClassStats {
  std::uint64_t speeches = 0;
  std::uint64_t sentences = 0;
  std::uint64_t words = 0;

  double sentences_per_speech() const {
    return speeches == 0 ? 0.0 : static_cast<double>(sentences) / static_cast<double>(speeches);
  }
  double words_per_sentence() const {
    return sentences == 0 ? 0.0 : static_cast<double>(words) / static_cast<double>(sentences);
  }
};

struct CorpusStats {
  std::array<ClassStats, kClassCount> per_class;
  ClassStats total;
};

CorpusStats stats(const Corpus& corpus);

// Table-style rendering: one row per class in RY, RN, DY, DN order plus total.
std::string render_stats_table(const CorpusStats& stats);

// Ingest + preprocess bookkeeping.
struct IngestAudit {
  std::size_t ingested = 0;
  std::vector<std::string> removed;
  std::vector<std::string> skipped;
  std::size_t retained = 0;

  std::string to_json() const;
};

// Corpus archive: one `{"id":..,"class":..,"tokens":[..]}` object per line.
void write_archive(std::ostream& out, const Corpus& corpus);
Corpus read_archive(std::istream& in, const Markers& markers = {});

}  // namespace speechgen
