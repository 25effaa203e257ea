#include "speechgen/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "speechgen/error.hpp"

namespace speechgen {

using nlohmann::json;

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_delimiter(std::string_view token) { return token == "." || token == "!" || token == "?"; }

bool has_alnum(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](unsigned char c) {
    return std::isalnum(c) || c >= 0x80;
  });
}

// Removes markup. Anything between '<' and the next '>' is dropped; stray
// angle brackets are dropped as well. A few common entities are decoded.
std::string strip_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '<') {
      const auto close = text.find('>', i + 1);
      if (close != std::string_view::npos) i = close;
      out += ' ';
      continue;
    }
    if (c == '>') {
      out += ' ';
      continue;
    }
    if (c == '&') {
      static constexpr std::pair<std::string_view, std::string_view> kEntities[] = {
          {"&amp;", "&"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&#39;", "'"},
          {"&nbsp;", " "}, {"&lt;", " "},   {"&gt;", " "}};
      bool replaced = false;
      for (const auto& [entity, value] : kEntities) {
        if (text.compare(i, entity.size(), entity) == 0) {
          out += value;
          i += entity.size() - 1;
          replaced = true;
          break;
        }
      }
      if (replaced) continue;
    }
    out += c;
  }
  return out;
}

constexpr std::string_view kLeading = "([{\"`";
constexpr std::string_view kTrailing = ",;:)]}\"!?.";

void split_chunk(std::string chunk, const PreprocessOptions& options, std::vector<std::string>& out) {
  while (!chunk.empty() && kLeading.find(chunk.front()) != std::string_view::npos) {
    if (chunk.size() >= 2 && chunk[0] == '`' && chunk[1] == '`') {
      out.emplace_back("``");
      chunk.erase(0, 2);
    } else {
      out.emplace_back(1, chunk.front());
      chunk.erase(0, 1);
    }
  }
  std::vector<std::string> tail;
  while (!chunk.empty() && kTrailing.find(chunk.back()) != std::string_view::npos) {
    if (chunk.back() == '.') {
      const std::string stem = chunk.substr(0, chunk.size() - 1);
      const bool inner_period = !stem.empty() && stem.find('.') != std::string::npos && stem.back() != '.';
      const bool abbreviation =
          std::find(options.abbreviations.begin(), options.abbreviations.end(), stem) !=
          options.abbreviations.end();
      if (!stem.empty() && has_alnum(stem) && (inner_period || abbreviation)) break;
    }
    tail.emplace_back(1, chunk.back());
    chunk.pop_back();
  }
  if (!chunk.empty()) out.push_back(std::move(chunk));
  out.insert(out.end(), tail.rbegin(), tail.rend());
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text, const PreprocessOptions& options) {
  std::string cleaned = strip_html(text);
  std::transform(cleaned.begin(), cleaned.end(), cleaned.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && is_space(cleaned[i])) ++i;
    const std::size_t b = i;
    while (i < cleaned.size() && !is_space(cleaned[i])) ++i;
    if (i > b) split_chunk(cleaned.substr(b, i - b), options, tokens);
  }
  return tokens;
}

std::optional<TokenizedSpeech> preprocess(const RawSpeech& raw, const PreprocessOptions& options) {
  const auto& mk = options.markers;
  const auto words = tokenize_text(raw.text, options);

  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  auto flush = [&] {
    // sentences made only of punctuation are dropped
    if (std::any_of(current.begin(), current.end(), [](const std::string& w) { return has_alnum(w); })) {
      sentences.push_back(std::move(current));
    }
    current.clear();
  };
  for (const auto& w : words) {
    if (mk.is_marker(w)) continue;
    if (is_delimiter(w)) {
      flush();  // repeated delimiters collapse because current is empty
    } else {
      current.push_back(w);
    }
  }
  flush();  // a final sentence without delimiter still gets a stop marker

  if (sentences.size() < 2) return std::nullopt;

  TokenizedSpeech out;
  out.id = raw.id;
  out.cls = raw.cls;
  out.tokens.push_back(mk.start);
  for (auto& s : sentences) {
    const std::size_t begin = out.tokens.size();
    for (auto& w : s) out.tokens.push_back(std::move(w));
    out.tokens.push_back(mk.stop);
    out.sentences.push_back({begin, out.tokens.size()});
  }
  out.tokens.push_back(mk.end);
  return out;
}

std::string render(std::span<const std::string> tokens, const Markers& markers) {
  // one sentence per line
  std::string out;
  bool line_start = true;
  for (const auto& t : tokens) {
    if (t == markers.start || t == markers.end) continue;
    if (!line_start) out += ' ';
    if (t == markers.stop) {
      out += ".\n";
      line_start = true;
    } else {
      out += t;
      line_start = false;
    }
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::vector<SentenceRange> sentence_ranges(std::span<const std::string> tokens, const Markers& markers) {
  std::vector<SentenceRange> ranges;
  std::size_t begin = 0;
  bool open = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t == markers.start || t == markers.end) {
      open = false;
      continue;
    }
    if (!open) {
      begin = i;
      open = true;
    }
    if (t == markers.stop) {
      ranges.push_back({begin, i + 1});
      open = false;
    }
  }
  return ranges;
}

TokenizedSpeech make_speech(std::string id, SpeechClass cls, std::vector<std::string> tokens,
                            const Markers& markers) {
  auto fail = [&](const std::string& what) { throw FormatError("speech '" + id + "': " + what); };
  if (tokens.size() < 2 || tokens.front() != markers.start) fail("must begin with the start marker");
  if (tokens.back() != markers.end) fail("must end with the end marker");
  if (tokens[tokens.size() - 2] != markers.stop) fail("a stop marker must precede the end marker");
  const auto starts = std::count(tokens.begin(), tokens.end(), markers.start);
  const auto ends = std::count(tokens.begin(), tokens.end(), markers.end);
  if (starts != 1 || ends != 1) fail("start and end markers must occur exactly once");
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] == markers.stop && tokens[i - 1] == markers.stop) fail("empty sentence");
    if (tokens[i] == markers.stop && tokens[i - 1] == markers.start) fail("empty sentence");
  }
  for (const auto& t : tokens) {
    if (t.empty() || std::any_of(t.begin(), t.end(), is_space)) fail("tokens must be non-empty without whitespace");
  }
  TokenizedSpeech s{std::move(id), cls, std::move(tokens), {}};
  s.sentences = sentence_ranges(s.tokens, markers);
  if (s.sentences.size() < 2) fail("needs at least two sentences");
  return s;
}

Corpus Corpus::build(std::vector<TokenizedSpeech> speeches, Markers markers) {
  std::sort(speeches.begin(), speeches.end(),
            [](const TokenizedSpeech& a, const TokenizedSpeech& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < speeches.size(); ++i) {
    if (speeches[i].id == speeches[i - 1].id) {
      throw ValidationError("duplicate speech id: " + speeches[i].id);
    }
  }
  Corpus corpus;
  corpus.speeches_ = std::move(speeches);
  corpus.markers_ = std::move(markers);
  for (std::size_t i = 0; i < corpus.speeches_.size(); ++i) {
    corpus.by_class_[corpus.speeches_[i].cls.index()].push_back(i);
  }
  return corpus;
}

const TokenizedSpeech* Corpus::find(std::string_view id) const {
  auto it = std::lower_bound(speeches_.begin(), speeches_.end(), id,
                             [](const TokenizedSpeech& s, std::string_view key) { return s.id < key; });
  if (it == speeches_.end() || it->id != id) return nullptr;
  return &*it;
}

CorpusStats stats(const Corpus& corpus) {
  CorpusStats out;
  const auto& mk = corpus.markers();
  for (const auto& s : corpus.speeches()) {
    auto& row = out.per_class[s.cls.index()];
    row.speeches += 1;
    for (const auto& t : s.tokens) {
      if (t == mk.stop) row.sentences += 1;
      else if (!mk.is_marker(t)) row.words += 1;
    }
  }
  for (const auto& row : out.per_class) {
    out.total.speeches += row.speeches;
    out.total.sentences += row.sentences;
    out.total.words += row.words;
  }
  return out;
}

std::string render_stats_table(const CorpusStats& st) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "" << std::right << std::setw(12) << "# Speeches" << std::setw(14)
     << "# Sentences" << std::setw(22) << "Avg. speech length" << std::setw(24) << "Avg. sentence length"
     << '\n';
  auto row = [&](const std::string& label, const ClassStats& c) {
    std::ostringstream a, b;
    a << std::fixed << std::setprecision(1) << c.sentences_per_speech() << " sentences";
    b << std::fixed << std::setprecision(1) << c.words_per_sentence() << " words";
    os << std::left << std::setw(8) << label << std::right << std::setw(12) << c.speeches << std::setw(14)
       << c.sentences << std::setw(22) << a.str() << std::setw(24) << b.str() << '\n';
  };
  for (const auto& cls : kAllClasses) row(cls.code(), st.per_class[cls.index()]);
  row("Total", st.total);
  return os.str();
}

std::string IngestAudit::to_json() const {
  json j;
  j["ingested"] = ingested;
  j["removed_count"] = removed.size();
  j["skipped_count"] = skipped.size();
  j["retained"] = retained;
  j["removed"] = removed;
  j["skipped"] = skipped;
  j["cleaning"] = {
      "html tags removed and entities decoded",
      "text lowercased",
      "punctuation split from words; abbreviations and dotted tokens keep their period",
      "sentence delimiters . ! ? replaced by the stop marker; repeats collapsed",
      "sentences without a letter or digit dropped",
      "speeches with fewer than two sentences removed",
  };
  return j.dump(2) + "\n";
}

void write_archive(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.speeches()) {
    json j;
    j["id"] = s.id;
    j["class"] = s.cls.code();
    j["tokens"] = s.tokens;
    out << j.dump() << '\n';
  }
}

Corpus read_archive(std::istream& in, const Markers& markers) {
  std::vector<TokenizedSpeech> speeches;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      const auto cls = SpeechClass::parse(j.at("class").get<std::string>());
      if (!cls) throw FormatError("unknown class '" + j.at("class").get<std::string>() + "'");
      speeches.push_back(make_speech(j.at("id").get<std::string>(), *cls,
                                     j.at("tokens").get<std::vector<std::string>>(), markers));
    } catch (const json::exception& e) {
      throw FormatError("corpus archive line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("corpus archive line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Corpus::build(std::move(speeches), markers);
}

}  // namespace speechgen
