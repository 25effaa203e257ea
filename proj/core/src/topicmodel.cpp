#include "speechgen/topicmodel.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "speechgen/error.hpp"

namespace speechgen {

using nlohmann::json;

namespace {

using C = CoarseClass;

Term split_term(std::string_view joined) {
  Term out;
  std::size_t b = 0;
  while (b <= joined.size()) {
    const auto e = joined.find(' ', b);
    out.emplace_back(joined.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

bool ranked_before(const TopicWeight& a, const TopicWeight& b, const TopicCatalog& catalog) {
  if (a.coverage != b.coverage) return a.coverage > b.coverage;
  return catalog.terms[a.term].words < catalog.terms[b.term].words;
}

}  // namespace

const std::vector<PosPattern>& term_patterns() {
  static const std::vector<PosPattern> kPatterns = {
      {C::Adjective, C::Noun},
      {C::Noun, C::Noun},
      {C::Adjective, C::Adjective, C::Noun},
      {C::Adjective, C::Noun, C::Noun},
      {C::Noun, C::Adjective, C::Noun},
      {C::Noun, C::Noun, C::Noun},
      {C::Noun, C::Preposition, C::Noun},
      {C::Noun, C::Conjunction, C::Noun},
  };
  return kPatterns;
}

bool matches_term_pattern(std::span<const PosTag> tags) {
  for (const auto& p : term_patterns()) {
    if (p.size() != tags.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = coarse(tags[i]) == p[i];
    if (ok) return true;
  }
  return false;
}

std::string join_term(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::uint64_t TermCounts::total() const {
  std::uint64_t n = 0;
  for (auto c : per_class) n += c;
  return n;
}

double significance(std::uint64_t class_count, std::uint64_t class_size, std::uint64_t corpus_count,
                    std::uint64_t corpus_size) {
  if (corpus_count == 0) throw ValidationError("significance is undefined for a term that never occurs");
  if (class_size == 0 || corpus_size == 0) throw ValidationError("significance needs non-empty class and corpus");
  const double p_class = static_cast<double>(class_count) / static_cast<double>(class_size);
  const double p_corpus = static_cast<double>(corpus_count) / static_cast<double>(corpus_size);
  return p_class / p_corpus;
}

std::size_t count_occurrences(std::span<const std::string> haystack, std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

TopicExtraction extract_terms(const Corpus& corpus, const TaggedCorpus& tagged, const ExtractionOptions& options) {
  if (tagged.speech_count() != corpus.size()) {
    throw ValidationError("tagged corpus does not match the corpus");
  }
  std::unordered_map<std::string, std::array<std::uint64_t, kClassCount>> counts;
  TopicExtraction out;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const std::size_t cls = corpus.speeches()[s].cls.index();
    for (const auto& sentence : tagged.sentences(s)) {
      const std::span<const PosTag> tags(sentence.tags);
      const std::span<const std::string> words(sentence.tokens);
      for (std::size_t len = 2; len <= 3; ++len) {
        for (std::size_t i = 0; i + len <= words.size(); ++i) {
          if (!matches_term_pattern(tags.subspan(i, len))) continue;
          counts[join_term(words.subspan(i, len))][cls] += 1;
          out.class_occurrences[cls] += 1;
          out.corpus_occurrences += 1;
        }
      }
    }
  }

  for (std::size_t c = 0; c < kClassCount; ++c) out.catalogs[c].cls = SpeechClass::from_index(c);
  out.candidates.reserve(counts.size());
  for (const auto& [joined, per_class] : counts) {
    TermCounts tc{split_term(joined), per_class};
    const std::uint64_t total = tc.total();
    if (total >= options.min_corpus_count) {
      for (std::size_t c = 0; c < kClassCount; ++c) {
        if (per_class[c] == 0) continue;
        const double z = significance(per_class[c], out.class_occurrences[c], total, out.corpus_occurrences);
        if (z > options.min_significance) {
          out.catalogs[c].terms.push_back({tc.words, SpeechClass::from_index(c), total, per_class[c], z});
        }
      }
    }
    out.candidates.push_back(std::move(tc));
  }
  std::sort(out.candidates.begin(), out.candidates.end(),
            [](const TermCounts& a, const TermCounts& b) { return a.words < b.words; });
  for (auto& cat : out.catalogs) {
    std::sort(cat.terms.begin(), cat.terms.end(), [](const TopicTerm& a, const TopicTerm& b) {
      if (a.significance != b.significance) return a.significance > b.significance;
      return a.words < b.words;
    });
  }
  return out;
}

void write_catalog(std::ostream& out, const TopicCatalog& catalog) {
  for (const auto& t : catalog.terms) {
    json j;
    j["class"] = catalog.cls.code();
    j["term"] = t.words;
    j["corpus_count"] = t.corpus_count;
    j["class_count"] = t.class_count;
    j["z"] = t.significance;
    out << j.dump() << '\n';
  }
}

TopicCatalog read_catalog(std::istream& in, SpeechClass expected) {
  TopicCatalog cat{expected, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      const auto cls = SpeechClass::parse(j.at("class").get<std::string>());
      if (!cls || !(*cls == expected)) throw FormatError("catalog record of another class");
      TopicTerm t;
      t.words = j.at("term").get<Term>();
      t.cls = *cls;
      t.corpus_count = j.at("corpus_count").get<std::uint64_t>();
      t.class_count = j.at("class_count").get<std::uint64_t>();
      t.significance = j.at("z").get<double>();
      if (t.words.size() < 2 || t.words.size() > 3) throw FormatError("terms have two or three words");
      if (t.class_count > t.corpus_count) throw FormatError("class_count exceeds corpus_count");
      cat.terms.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw FormatError("catalog line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("catalog line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::stable_sort(cat.terms.begin(), cat.terms.end(), [](const TopicTerm& a, const TopicTerm& b) {
    if (a.significance != b.significance) return a.significance > b.significance;
    return a.words < b.words;
  });
  return cat;
}

std::string render_topics_table(std::span<const TopicCatalog> catalogs, std::size_t top) {
  constexpr int kWidth = 30;
  std::ostringstream os;
  for (const auto& c : catalogs) os << std::left << std::setw(kWidth) << c.cls.code();
  os << '\n';
  for (std::size_t row = 0; row < top; ++row) {
    bool any = false;
    std::ostringstream line;
    for (const auto& c : catalogs) {
      std::string cell;
      if (row < c.terms.size()) {
        cell = c.terms[row].text();
        any = true;
      }
      line << std::left << std::setw(kWidth) << cell;
    }
    if (!any) break;
    os << line.str() << '\n';
  }
  for (const auto& c : catalogs) {
    os << std::left << std::setw(kWidth) << ("Total: " + std::to_string(c.terms.size()) + " topics");
  }
  os << '\n';
  return os.str();
}

TopicIndex::TopicIndex(const Corpus& corpus, TopicCatalog catalog) : catalog_(std::move(catalog)) {
  for (std::size_t i = 0; i < catalog_.terms.size(); ++i) lookup_.emplace(catalog_.terms[i].text(), i);
  for (std::size_t idx : corpus.class_members(catalog_.cls)) speeches_.push_back(&corpus.speeches()[idx]);

  occurrences_.assign(catalog_.terms.size(), {});
  class_totals_.assign(catalog_.terms.size(), 0);
  speech_counts_.resize(speeches_.size());
  speech_terms_.resize(speeches_.size());
  for (std::size_t j = 0; j < speeches_.size(); ++j) {
    const auto& tokens = speeches_[j]->tokens;
    auto& sc = speech_counts_[j];
    sc.length = tokens.size();
    for (const auto& t : tokens) sc.words[t] += 1;
    const auto per_term = count_terms(tokens);
    for (std::size_t t = 0; t < per_term.size(); ++t) {
      if (per_term[t] == 0) continue;
      occurrences_[t].emplace_back(static_cast<std::uint32_t>(j), per_term[t]);
      speech_terms_[j].emplace_back(static_cast<std::uint32_t>(t), per_term[t]);
      class_totals_[t] += per_term[t];
    }
  }
}

std::optional<std::size_t> TopicIndex::find_term(std::span<const std::string> words) const {
  auto it = lookup_.find(join_term(words));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint32_t> TopicIndex::count_terms(std::span<const std::string> tokens) const {
  std::vector<std::uint32_t> out(catalog_.terms.size(), 0);
  if (lookup_.empty()) return out;
  std::string key;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    key = tokens[i];
    for (std::size_t len = 2; len <= 3 && i + len <= tokens.size(); ++len) {
      key += ' ';
      key += tokens[i + len - 1];
      auto it = lookup_.find(key);
      if (it != lookup_.end()) out[it->second] += 1;
    }
  }
  return out;
}

double TopicIndex::coverage(std::uint64_t occurrences, std::size_t term) const {
  const auto total = class_totals_[term];
  if (occurrences == 0 || total == 0) return 0.0;
  return std::min(1.0, static_cast<double>(occurrences) / static_cast<double>(total));
}

double TopicIndex::topic_coverage(std::span<const std::string> tokens, std::size_t term) const {
  return coverage(count_occurrences(tokens, catalog_.terms[term].words), term);
}

std::vector<TopicWeight> TopicIndex::ranked_from_counts(std::span<const std::uint32_t> counts) const {
  std::vector<TopicWeight> out;
  double sum = 0.0;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    const double tc = coverage(counts[t], t);
    if (tc > 0.0) {
      out.push_back({t, tc, 0.0});
      sum += tc;
    }
  }
  std::sort(out.begin(), out.end(),
            [&](const TopicWeight& a, const TopicWeight& b) { return ranked_before(a, b, catalog_); });
  for (auto& w : out) w.probability = w.coverage / sum;
  return out;
}

std::vector<TopicWeight> TopicIndex::ranked_topics(std::span<const std::string> tokens) const {
  return ranked_from_counts(count_terms(tokens));
}

std::vector<TopicWeight> TopicIndex::current_from_counts(std::span<const std::uint32_t> counts, std::size_t k) const {
  auto ranked = ranked_from_counts(counts);
  if (ranked.size() > k) ranked.resize(k);
  double sum = 0.0;
  for (const auto& w : ranked) sum += w.coverage;
  for (auto& w : ranked) w.probability = w.coverage / sum;
  return ranked;
}

std::vector<TopicWeight> TopicIndex::current_topics(std::span<const std::string> tokens, std::size_t k) const {
  return current_from_counts(count_terms(tokens), k);
}

std::vector<double> TopicIndex::speech_weights(std::span<const TopicWeight> topics) const {
  std::vector<double> sums(speeches_.size(), 0.0);
  // coverage of each topic inside each class speech
  std::vector<std::vector<double>> cov(topics.size());
  for (std::size_t k = 0; k < topics.size(); ++k) {
    cov[k].assign(speeches_.size(), 0.0);
    for (const auto& [j, n] : occurrences_[topics[k].term]) {
      cov[k][j] = coverage(n, topics[k].term);
      sums[j] += cov[k][j];
    }
  }
  std::vector<double> weights(speeches_.size(), 0.0);
  for (std::size_t j = 0; j < speeches_.size(); ++j) {
    if (sums[j] <= 0.0) continue;
    for (std::size_t k = 0; k < topics.size(); ++k) weights[j] += cov[k][j] / sums[j];
  }
  return weights;
}

std::vector<double> TopicIndex::p_topic_weighted(std::span<const std::string> words, std::span<const double> weights,
                                                 double epsilon) const {
  std::vector<double> numerators(words.size(), 0.0);
  double denominator = 0.0;
  for (std::size_t j = 0; j < speeches_.size(); ++j) {
    const double w = weights[j];
    if (w == 0.0) continue;
    const auto& sc = speech_counts_[j];
    denominator += static_cast<double>(sc.length) * w;
    for (std::size_t i = 0; i < words.size(); ++i) {
      auto it = sc.words.find(words[i]);
      if (it != sc.words.end()) numerators[i] += static_cast<double>(it->second) * w;
    }
  }
  for (auto& n : numerators) n /= denominator + epsilon;
  return numerators;
}

std::vector<double> TopicIndex::p_topic(std::span<const std::string> words, std::span<const TopicWeight> topics,
                                        double epsilon) const {
  if (topics.empty()) return std::vector<double>(words.size(), 0.0);
  return p_topic_weighted(words, speech_weights(topics), epsilon);
}

double TopicIndex::p_topic(std::string_view word, std::span<const TopicWeight> topics, double epsilon) const {
  const std::string w(word);
  return p_topic(std::span<const std::string>(&w, 1), topics, epsilon)[0];
}

std::vector<TopicWeight> TopicIndex::ranked_topics_of_class_speech(std::size_t j) const {
  std::vector<std::uint32_t> counts(catalog_.terms.size(), 0);
  for (const auto& [t, n] : speech_terms_[j]) counts[t] = n;
  return ranked_from_counts(counts);
}

}  // namespace speechgen
