#include "speechgen/postag.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "speechgen/error.hpp"

namespace speechgen {

namespace {

constexpr std::array<std::string_view, kTagCount> kTagNames = {
    "CC",  "CD",  "DT",  "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",  "MD",  "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM",
    "TO",  "UH",  "VB",  "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB",
    ",",   ".",   ":",   "(",   ")",   "``",  "''",  "#",   "$",
};

constexpr std::array<PosTag, kTagCount> make_all_tags() {
  std::array<PosTag, kTagCount> out{};
  for (std::size_t i = 0; i < kTagCount; ++i) out[i] = static_cast<PosTag>(i);
  return out;
}

constexpr auto kAllTags = make_all_tags();

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_number(std::string_view w) {
  bool digit = false;
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
    else if (c != ',' && c != '.' && c != '-' && c != '/' && c != '%') return false;
  }
  return digit;
}

bool is_alpha_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isalpha(c); });
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

std::string_view tag_name(PosTag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<PosTag> parse_tag(std::string_view name) {
  for (std::size_t i = 0; i < kTagCount; ++i) {
    if (kTagNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

std::span<const PosTag> all_tags() { return kAllTags; }

CoarseClass coarse(PosTag tag) {
  switch (tag) {
    case PosTag::NN:
    case PosTag::NNS:
    case PosTag::NNP:
    case PosTag::NNPS:
      return CoarseClass::Noun;
    case PosTag::JJ:
    case PosTag::JJR:
    case PosTag::JJS:
      return CoarseClass::Adjective;
    case PosTag::IN:
      return CoarseClass::Preposition;
    case PosTag::CC:
      return CoarseClass::Conjunction;
    default:
      return CoarseClass::Other;
  }
}

void Lexicon::add(std::string_view word, PosTag tag, std::uint64_t count) {
  auto& e = entries_[std::string(word)];
  auto it = std::find_if(e.counts.begin(), e.counts.end(), [&](const auto& p) { return p.first == tag; });
  if (it == e.counts.end()) e.counts.emplace_back(tag, count);
  else it->second += count;
  std::uint64_t best_count = 0;
  for (const auto& [t, c] : e.counts) {
    if (c > best_count || (c == best_count && t < e.best)) {
      best_count = c;
      e.best = t;
    }
  }
}

void Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read lexicon file: " + path.string());
  load(in, path.string());
}

void Lexicon::load(std::istream& in, std::string_view source_name) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string word, tag, count, extra;
    fields >> word >> tag >> count;
    const bool has_extra = static_cast<bool>(fields >> extra);
    const auto parsed_tag = parse_tag(tag);
    const auto parsed_count = parse_count(count);
    const bool valid = !word.empty() && parsed_tag && parsed_count && !has_extra;
    if (valid) {
      add(word, *parsed_tag, *parsed_count);
      continue;
    }
    if (word.empty() || word.front() == '#') continue;
    throw FormatError(std::string(source_name) + ":" + std::to_string(line_no) +
                      ": expected 'word tag count' with a Penn Treebank tag");
  }
}

std::optional<PosTag> Lexicon::lookup(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second.best;
}

std::uint64_t Lexicon::count(std::string_view word, PosTag tag) const {
  auto it = entries_.find(std::string(word));
  if (it == entries_.end()) return 0;
  for (const auto& [t, c] : it->second.counts) {
    if (t == tag) return c;
  }
  return 0;
}

Lexicon load_lexicon_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw FormatError("lexicon directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Lexicon lex;
  for (const auto& f : files) lex.load(f);
  return lex;
}

std::optional<PosTag> LexiconTagger::shape_rule(std::string_view w) {
  if (w == "," ) return PosTag::Comma;
  if (w == "." || w == "!" || w == "?") return PosTag::Period;
  if (w == ":" || w == ";" || w == "--" || w == "-" || w == "...") return PosTag::Colon;
  if (w == "(" || w == "[" || w == "{") return PosTag::LeftParen;
  if (w == ")" || w == "]" || w == "}") return PosTag::RightParen;
  if (w == "``" || w == "\"" || w == "`") return PosTag::OpenQuote;
  if (w == "''" || w == "'") return PosTag::CloseQuote;
  if (w == "$") return PosTag::Dollar;
  if (w == "#") return PosTag::Hash;
  if (is_number(w)) return PosTag::CD;
  return std::nullopt;
}

std::optional<PosTag> LexiconTagger::suffix_rule(std::string_view w) {
  struct Rule {
    std::string_view suffix;
    PosTag tag;
  };
  // Longest suffixes first; the first matching rule wins.
  static constexpr Rule kRules[] = {
      {"ization", PosTag::NN}, {"isation", PosTag::NN}, {"ically", PosTag::RB},
      {"ments", PosTag::NNS},  {"tions", PosTag::NNS},  {"ness", PosTag::NN},
      {"ment", PosTag::NN},    {"tion", PosTag::NN},    {"sion", PosTag::NN},
      {"ship", PosTag::NN},    {"ance", PosTag::NN},    {"ence", PosTag::NN},
      {"able", PosTag::JJ},    {"ible", PosTag::JJ},    {"less", PosTag::JJ},
      {"ical", PosTag::JJ},    {"ity", PosTag::NN},     {"ism", PosTag::NN},
      {"ist", PosTag::NN},     {"ize", PosTag::VB},     {"ing", PosTag::VBG},
      {"ful", PosTag::JJ},     {"ous", PosTag::JJ},     {"ive", PosTag::JJ},
      {"ed", PosTag::VBD},     {"ly", PosTag::RB},      {"ic", PosTag::JJ},
      {"al", PosTag::JJ},
  };
  for (const auto& r : kRules) {
    if (w.size() > r.suffix.size() + 1 && ends_with(w, r.suffix)) return r.tag;
  }
  if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is") && is_alpha_word(w)) {
    return PosTag::NNS;
  }
  return std::nullopt;
}

PosTag LexiconTagger::tag_word(std::string_view word) const {
  if (auto t = lexicon_.lookup(word)) return *t;
  if (auto t = shape_rule(word)) return *t;
  // abbreviations keep their trailing period in the corpus
  if (word.size() > 1 && word.back() == '.') {
    if (auto t = lexicon_.lookup(word.substr(0, word.size() - 1))) return *t;
    return PosTag::NNP;
  }
  if (word.find('-') != std::string_view::npos && word.front() != '-' && word.back() != '-') {
    const auto last = word.substr(word.rfind('-') + 1);
    if (auto t = lexicon_.lookup(last); t && coarse(*t) == CoarseClass::Noun) return *t;
    return PosTag::JJ;
  }
  if (auto t = suffix_rule(word)) return *t;
  return PosTag::NN;
}

std::vector<PosTag> LexiconTagger::tag(std::span<const std::string> tokens) const {
  std::vector<PosTag> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(tag_word(t));
  return out;
}

std::size_t TaggedCorpus::sentence_count() const {
  std::size_t n = 0;
  for (const auto& s : by_speech_) n += s.size();
  return n;
}

TaggedCorpus tag_corpus(const Corpus& corpus, const Tagger& tagger) {
  std::vector<std::vector<TaggedSentence>> out;
  out.reserve(corpus.size());
  for (const auto& speech : corpus.speeches()) {
    auto& tagged = out.emplace_back();
    tagged.reserve(speech.sentences.size());
    for (std::size_t i = 0; i < speech.sentences.size(); ++i) {
      tagged.push_back(tagger.tag_sentence(speech.sentence_words(i)));
    }
  }
  return TaggedCorpus(std::move(out));
}

TaggedSentence parse_pretagged_line(std::string_view line) {
  TaggedSentence out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i == b) continue;
    const auto item = line.substr(b, i - b);
    const auto us = item.rfind('_');
    if (us == std::string_view::npos || us == 0 || us + 1 == item.size()) {
      throw FormatError("pre-tagged token must look like word_TAG: " + std::string(item));
    }
    const auto tag = parse_tag(item.substr(us + 1));
    if (!tag) throw FormatError("unknown tag in pre-tagged token: " + std::string(item));
    out.tokens.emplace_back(item.substr(0, us));
    out.tags.push_back(*tag);
  }
  return out;
}

std::string format_pretagged(const TaggedSentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i) out += ' ';
    out += sentence.tokens[i];
    out += '_';
    out += tag_name(sentence.tags[i]);
  }
  return out;
}

TaggedCorpus load_pretagged(std::istream& in, const Corpus& corpus) {
  std::vector<std::vector<TaggedSentence>> out(corpus.size());
  std::string line;
  std::size_t line_no = 0;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& speech = corpus.speeches()[s];
    for (std::size_t k = 0; k < speech.sentences.size(); ++k) {
      do {
        if (!std::getline(in, line)) {
          throw FormatError("pre-tagged corpus ends before speech '" + speech.id + "' sentence " +
                            std::to_string(k));
        }
        ++line_no;
      } while (line.find_first_not_of(" \t\r") == std::string::npos);
      auto tagged = parse_pretagged_line(line);
      const auto words = speech.sentence_words(k);
      if (!std::equal(words.begin(), words.end(), tagged.tokens.begin(), tagged.tokens.end())) {
        throw FormatError("pre-tagged line " + std::to_string(line_no) + " does not match speech '" +
                          speech.id + "' sentence " + std::to_string(k));
      }
      out[s].push_back(std::move(tagged));
    }
  }
  return TaggedCorpus(std::move(out));
}

void TaggedCorpus::write_cache(std::ostream& out, const Corpus& corpus) const {
  for (std::size_t s = 0; s < by_speech_.size(); ++s) {
    for (std::size_t k = 0; k < by_speech_[s].size(); ++k) {
      out << corpus.speeches()[s].id << '\t' << k << '\t' << format_pretagged(by_speech_[s][k]) << '\n';
    }
  }
}

TaggedCorpus TaggedCorpus::read_cache(std::istream& in, const Corpus& corpus) {
  std::vector<std::vector<TaggedSentence>> out(corpus.size());
  std::string line;
  std::size_t line_no = 0;
  std::size_t speech = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw FormatError("tag cache line " + std::to_string(line_no) + ": malformed");
    const std::string id = line.substr(0, t1);
    while (speech < corpus.size() && corpus.speeches()[speech].id != id) ++speech;
    if (speech == corpus.size()) {
      throw FormatError("tag cache line " + std::to_string(line_no) + ": unknown or out-of-order speech '" + id + "'");
    }
    const auto expected = std::to_string(out[speech].size());
    if (line.compare(t1 + 1, t2 - t1 - 1, expected) != 0) {
      throw FormatError("tag cache line " + std::to_string(line_no) + ": sentence index out of sequence");
    }
    out[speech].push_back(parse_pretagged_line(std::string_view(line).substr(t2 + 1)));
  }
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    if (out[s].size() != corpus.speeches()[s].sentences.size()) {
      throw FormatError("tag cache does not cover speech '" + corpus.speeches()[s].id + "'");
    }
  }
  return TaggedCorpus(std::move(out));
}

}  // namespace speechgen
