#include "speechgen/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "speechgen/error.hpp"

namespace speechgen {

using nlohmann::json;

std::string tag_sequence_key(std::span<const PosTag> tags) {
  std::string key;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) key += ' ';
    key += tag_name(tags[i]);
  }
  return key;
}

PosIndex PosIndex::build(const TaggedCorpus& tagged) {
  PosIndex idx;
  for (std::size_t s = 0; s < tagged.speech_count(); ++s) {
    for (const auto& sentence : tagged.sentences(s)) idx.sequences_.insert(tag_sequence_key(sentence.tags));
  }
  return idx;
}

bool PosIndex::contains(std::span<const PosTag> tags) const {
  return sequences_.count(tag_sequence_key(tags)) > 0;
}

void PosIndex::save(std::ostream& out) const {
  std::vector<std::string> sorted(sequences_.begin(), sequences_.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& s : sorted) out << s << '\n';
}

PosIndex PosIndex::load(std::istream& in) {
  PosIndex idx;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string tag;
    while (fields >> tag) {
      if (!parse_tag(tag)) throw FormatError("POS index line " + std::to_string(line_no) + ": unknown tag " + tag);
    }
    idx.sequences_.insert(line);
  }
  return idx;
}

std::vector<std::vector<std::string>> split_sentences(std::span<const std::string> tokens, const Markers& markers) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  for (const auto& t : tokens) {
    if (t == markers.start || t == markers.end) continue;
    if (t == markers.stop) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(t);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

GrammarResult grammar_eval(std::span<const std::string> tokens, const Tagger& tagger, const PosIndex& index,
                           const Markers& markers) {
  const auto sentences = split_sentences(tokens, markers);
  if (sentences.empty()) throw ValidationError("speech contains no sentences");
  GrammarResult r;
  r.total = sentences.size();
  for (const auto& s : sentences) {
    if (index.contains(tagger.tag(s))) {
      ++r.matched;
    } else {
      std::string text;
      for (const auto& w : s) text += w + ' ';
      text += '.';
      r.unmatched.push_back(std::move(text));
    }
  }
  r.score = static_cast<double>(r.matched) / static_cast<double>(r.total);
  return r;
}

ContentResult content_eval(std::span<const std::string> tokens, const TopicIndex& topics,
                           const ContentOptions& options) {
  ContentResult r;
  r.topics = topics.ranked_topics(tokens);
  for (const auto& w : r.topics) r.self_score += w.coverage;

  double best = -1.0;
  bool best_exact = false;
  for (std::size_t j = 0; j < topics.class_speech_count(); ++j) {
    const auto other = topics.ranked_topics_of_class_speech(j);
    double score = 0.0;
    const std::size_t n = std::min(other.size(), r.topics.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (other[i].term == r.topics[i].term) score += r.topics[i].coverage;
    }
    const auto& speech = topics.class_speech(j);
    const bool exact = std::equal(tokens.begin(), tokens.end(), speech.tokens.begin(), speech.tokens.end());
    // class speeches come in id order, so strict comparisons keep the smaller id
    if (score > best || (score == best && exact && !best_exact)) {
      best = score;
      best_exact = exact;
      r.best_matching_speech = speech.id;
    }
  }
  if (best <= 0.0) {
    r.score = 0.0;
    if (!best_exact) r.best_matching_speech.clear();
    return r;
  }
  r.score = best;
  if (options.normalize_by_self_score && r.self_score > 0.0) r.score /= r.self_score;
  return r;
}

std::string AutoEvalReport::to_json(const TopicIndex* topics) const {
  json j;
  j["speech_id"] = speech_id;
  j["grammar_score"] = grammar.score;
  j["matched_sentences"] = grammar.matched;
  j["total_sentences"] = grammar.total;
  j["unmatched_sentences"] = grammar.unmatched;
  j["content_score"] = content.score;
  j["best_matching_speech"] = content.best_matching_speech;
  j["self_score"] = content.self_score;
  j["mean"] = mean();
  if (topics) {
    json order = json::array();
    for (const auto& w : content.topics) {
      order.push_back({{"term", topics->term(w.term).text()}, {"coverage", w.coverage}});
    }
    j["topics"] = std::move(order);
  }
  return j.dump(2) + "\n";
}

std::string render_auto_table(std::span<const AutoEvalReport> reports) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "" << std::right << std::setw(26) << "Grammatical correctness"
     << std::setw(18) << "Speech content" << std::setw(10) << "Mean" << '\n';
  os << std::fixed << std::setprecision(2);
  double g = 0.0, c = 0.0;
  for (const auto& r : reports) {
    os << std::left << std::setw(24) << r.speech_id << std::right << std::setw(26) << r.grammar.score
       << std::setw(18) << r.content.score << std::setw(10) << r.mean() << '\n';
    g += r.grammar.score;
    c += r.content.score;
  }
  if (reports.size() > 1) {
    const double n = static_cast<double>(reports.size());
    os << std::left << std::setw(24) << "Average" << std::right << std::setw(26) << g / n << std::setw(18)
       << c / n << std::setw(10) << (g + c) / (2.0 * n) << '\n';
  }
  return os.str();
}

void ManualScoreCard::validate() const {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] < 0 || scores[i] > 3) {
      throw ValidationError("score card '" + speech_id + "': " + kManualCriteria[i] + " must be between 0 and 3");
    }
  }
}

namespace {

constexpr std::array<const char*, 4> kCardKeys = {"grammatical_correctness", "sentence_transitions",
                                                  "speech_structure", "speech_content"};

}  // namespace

std::vector<ManualScoreCard> read_score_cards(std::istream& in) {
  std::vector<ManualScoreCard> cards;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      ManualScoreCard card;
      card.speech_id = j.at("speech_id").get<std::string>();
      for (std::size_t i = 0; i < kCardKeys.size(); ++i) card.scores[i] = j.at(kCardKeys[i]).get<int>();
      card.rater = j.value("rater", "");
      if (j.contains("total") && j["total"].get<int>() != card.total()) {
        throw ValidationError("score card '" + card.speech_id + "': total does not equal the sum of the criteria");
      }
      card.validate();
      cards.push_back(std::move(card));
    } catch (const json::exception& e) {
      throw FormatError("score card line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cards;
}

void write_score_cards(std::ostream& out, std::span<const ManualScoreCard> cards) {
  for (const auto& card : cards) {
    json j;
    j["speech_id"] = card.speech_id;
    for (std::size_t i = 0; i < kCardKeys.size(); ++i) j[kCardKeys[i]] = card.scores[i];
    j["total"] = card.total();
    j["rater"] = card.rater;
    out << j.dump() << '\n';
  }
}

ManualSummary aggregate_manual(std::span<const ManualScoreCard> cards) {
  if (cards.empty()) throw ValidationError("no score cards to aggregate");
  ManualSummary s;
  std::array<long, 4> sums{};
  long total = 0;
  for (const auto& card : cards) {
    card.validate();
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += card.scores[i];
    total += card.total();
    s.cards.push_back(card);
  }
  const double n = static_cast<double>(cards.size());
  for (std::size_t i = 0; i < sums.size(); ++i) s.criterion_means[i] = static_cast<double>(sums[i]) / n;
  s.mean_total = static_cast<double>(total) / n;
  return s;
}

std::string render_manual_table(const ManualSummary& summary) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "" << std::right;
  for (const char* name : kManualCriteria) os << std::setw(26) << name;
  os << std::setw(8) << "Total" << '\n';
  for (const auto& card : summary.cards) {
    os << std::left << std::setw(16) << card.speech_id << std::right;
    for (int v : card.scores) os << std::setw(26) << v;
    os << std::setw(8) << card.total() << '\n';
  }
  os << std::left << std::setw(16) << "Average" << std::right;
  auto fmt = [](double v) {
    std::ostringstream f;
    f << std::setprecision(3) << v;
    return f.str();
  };
  for (double m : summary.criterion_means) os << std::setw(26) << fmt(m);
  os << std::setw(8) << fmt(summary.mean_total) << '\n';
  return os.str();
}

}  // namespace speechgen
