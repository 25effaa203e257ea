// Corpus statistics and topic extraction on the real Convote training set.
// Point CONVOTE_DIR at the directory holding its .txt files; without it the
// test reports itself as skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <set>

#include <speechgen/topicmodel.hpp>

#include "fixture.hpp"

using namespace speechgen;
using Clock = std::chrono::steady_clock;

namespace {

struct Row {
  double speeches, sentences, avg_sentences, avg_words;
};

// RY, RN, DY, DN and total
const Row kExpected[5] = {
    {1259, 20697, 16.4, 23.0}, {151, 3552, 23.5, 23.5}, {222, 4342, 19.6, 23.6},
    {1139, 22280, 19.6, 22.7}, {2771, 50871, 18.4, 23.0},
};
const double kCatalogTotals[4] = {205, 84, 98, 182};

const std::vector<std::string> kTopRY = {
    "head start program", "public law", "death tax", "budget request", "community protection act",
    "community protection", "gang deterrence", "federal jurisdiction", "committee on homeland",
    "deterrence and community"};
const std::vector<std::string> kTopDN = {
    "school of law", "cbc alternative", "cbc budget", "professor of law", "republican budget",
    "gun industry", "big oil", "judicial conference", "democratic alternative", "middle class"};

bool within(double got, double want, double rel) { return std::fabs(got - want) <= rel * want; }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

int main() {
  const char* dir = std::getenv("CONVOTE_DIR");
  if (dir == nullptr || *dir == '\0') {
    std::cout << "SKIP  1. corpus statistics: CONVOTE_DIR not set\n";
    std::cout << "SKIP  2. topic extraction: CONVOTE_DIR not set\n";
    return 77;
  }
  bool ok = true;

  const auto t0 = Clock::now();
  const IngestResult raw = ingest(dir, convote_filename_rule());
  std::vector<TokenizedSpeech> kept;
  for (const auto& r : raw.speeches) {
    if (auto s = preprocess(r)) kept.push_back(std::move(*s));
  }
  const Corpus corpus = Corpus::build(std::move(kept));
  const CorpusStats st = stats(corpus);
  const double stats_time = seconds_since(t0);

  std::cout << render_stats_table(st);
  bool c1 = stats_time < 60.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const ClassStats& got = i < 4 ? st.per_class[i] : st.total;
    const Row& want = kExpected[i];
    const bool row_ok = within(static_cast<double>(got.speeches), want.speeches, 0.02) &&
                        within(static_cast<double>(got.sentences), want.sentences, 0.05) &&
                        std::fabs(got.sentences_per_speech() - want.avg_sentences) <= 0.5 &&
                        std::fabs(got.words_per_sentence() - want.avg_words) <= 1.0;
    if (!row_ok) {
      std::cout << "        row " << (i < 4 ? kAllClasses[i].code() : std::string("total")) << ": " << got.speeches
                << " speeches, " << got.sentences << " sentences outside tolerance\n";
    }
    c1 = c1 && row_ok;
  }
  std::cout << (c1 ? "PASS" : "FAIL") << "  1. corpus statistics (" << stats_time << " s)\n";
  ok = ok && c1;

  const auto t1 = Clock::now();
  const TaggedCorpus tagged = tag_corpus(corpus, fixture::bundled_tagger());
  const TopicExtraction ex = extract_terms(corpus, tagged);
  const double topic_time = seconds_since(t1);

  std::cout << render_topics_table(ex.catalogs, 10);
  bool c2 = topic_time < 120.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double n = static_cast<double>(ex.catalogs[i].terms.size());
    if (!within(n, kCatalogTotals[i], 0.15)) {
      std::cout << "        " << kAllClasses[i].code() << " catalog has " << n << " terms\n";
      c2 = false;
    }
  }
  auto hits = [&](SpeechClass k, const std::vector<std::string>& top) {
    std::set<std::string> have;
    for (const auto& t : ex.catalogs[k.index()].terms) have.insert(t.text());
    return std::count_if(top.begin(), top.end(), [&](const std::string& s) { return have.count(s) > 0; });
  };
  const auto ry = hits(*SpeechClass::parse("RY"), kTopRY);
  const auto dn = hits(*SpeechClass::parse("DN"), kTopDN);
  std::cout << "        top-10 overlap: RY " << ry << "/10, DN " << dn << "/10\n";
  c2 = c2 && ry >= 6 && dn >= 6;
  std::cout << (c2 ? "PASS" : "FAIL") << "  2. topic extraction (" << topic_time << " s)\n";
  ok = ok && c2;

  return ok ? 0 : 1;
}
