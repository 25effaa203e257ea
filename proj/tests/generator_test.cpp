#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include <speechgen/error.hpp>
#include <speechgen/generator.hpp>

#include "fixture.hpp"
#include "oracle.hpp"

using namespace speechgen;
using Tokens = std::vector<std::string>;

namespace {

const Markers mk;

SpeechClass cls(const char* code) { return *SpeechClass::parse(code); }

struct Models {
  Corpus corpus;
  TaggedCorpus tagged;
  std::array<TopicCatalog, kClassCount> catalogs;
  std::vector<NGramModel> lms;
  std::vector<TopicIndex> indexes;

  explicit Models(Corpus c, const ExtractionOptions& opt = {}) : corpus(std::move(c)) {
    tagged = tag_corpus(corpus, fixture::bundled_tagger());
    catalogs = extract_terms(corpus, tagged, opt).catalogs;
    for (const auto& k : kAllClasses) {
      lms.push_back(corpus.class_members(k).empty() ? NGramModel{} : NGramModel::train(corpus, k));
      indexes.emplace_back(corpus, catalogs[k.index()]);
    }
  }
  WordGenerator generator(SpeechClass k) const { return WordGenerator(lms[k.index()], indexes[k.index()]); }
};

const Models& fixture_models() {
  static const Models m(fixture::make_corpus());
  return m;
}

GenerationConfig config(const char* code, double lambda, std::uint64_t seed) {
  GenerationConfig c;
  c.cls = cls(code);
  c.lambda = lambda;
  c.seed = seed;
  return c;
}

bool occurs_in_class(const Corpus& corpus, SpeechClass k, std::span<const std::string> gram) {
  for (const auto& s : corpus.speeches()) {
    if (!(s.cls == k)) continue;
    for (std::size_t j = 0; j + gram.size() <= s.tokens.size(); ++j) {
      if (std::equal(gram.begin(), gram.end(), s.tokens.begin() + static_cast<std::ptrdiff_t>(j))) return true;
    }
  }
  return false;
}

}  // namespace

TEST(Config, Validation) {
  GenerationConfig c;
  EXPECT_NO_THROW(c.validate());
  c.lambda = 1.5;
  EXPECT_THROW(c.validate(), ValidationError);
  c.lambda = -0.1;
  EXPECT_THROW(c.validate(), ValidationError);
  c.lambda = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(c.validate(), ValidationError);
  c.lambda = 0.0;
  EXPECT_NO_THROW(c.validate());
  c.word_limit = 5;
  EXPECT_THROW(c.validate(), ValidationError);
  c.word_limit = 6;
  c.epsilon = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_EQ(parse_mode("sentence"), GenerationMode::SentenceBased);
  EXPECT_FALSE(parse_mode("rnn"));
}

TEST(WordGen, RejectsClassMismatch) {
  const auto& m = fixture_models();
  EXPECT_THROW(WordGenerator(m.lms[0], m.indexes[1]), ValidationError);
  const auto gen = m.generator(cls("RY"));
  EXPECT_THROW(gen.generate(config("DN", 0.5, 1)), ValidationError);
}

TEST(WordGen, SingleSpeechCorpusReproducesIt) {
  const Corpus c = Corpus::build({fixture::speech("only", "DY", "we must pass this bill today . the people want clean water .")});
  const Models m(Corpus(c), {.min_corpus_count = 1, .min_significance = 0.0});
  const auto gen = m.generator(cls("DY"));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rec = gen.generate(config("DY", 0.5, seed));
    EXPECT_EQ(rec.tokens, c.speeches()[0].tokens);
    EXPECT_FALSE(rec.truncated);
    for (const auto& st : rec.steps) {
      ASSERT_EQ(st.candidates.size(), 1u);
      EXPECT_DOUBLE_EQ(st.candidates[0].probability, 1.0);
    }
  }
}

TEST(WordGen, LambdaOneIsLanguageModelOnly) {
  const auto& m = fixture_models();
  const auto gen = m.generator(cls("DN"));
  std::size_t steps = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rec = gen.generate(config("DN", 1.0, seed));
    for (const auto& st : rec.steps) {
      for (const auto& c : st.candidates) {
        EXPECT_NEAR(c.combined, c.p_language, 1e-12);
        ++steps;
      }
    }
  }
  EXPECT_GT(steps, 100u);
}

TEST(WordGen, LambdaZeroFollowsTopicWhenActive) {
  const auto& m = fixture_models();
  const auto gen = m.generator(cls("RY"));
  std::size_t active = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rec = gen.generate(config("RY", 0.0, seed));
    for (const auto& st : rec.steps) {
      double mass = 0.0;
      for (const auto& c : st.candidates) mass += c.p_topic;
      for (const auto& c : st.candidates) {
        EXPECT_NEAR(c.combined, mass > 0.0 ? c.p_topic : c.p_language, 1e-12);
      }
      active += mass > 0.0;
    }
  }
  EXPECT_GT(active, 0u);
}

TEST(WordGen, NoTopicsFallsBackToLanguageModel) {
  const auto& m = fixture_models();
  const Tokens opener = {mk.start, "mr.", "speaker", ",", "i"};
  const TopicIndex empty(m.corpus, {cls("DN"), {}});
  const WordGenerator gen(m.lms[cls("DN").index()], empty);
  const GenerationState st(empty, opener);
  const auto trace = gen.score_step(st, config("DN", 0.0, 0));
  if (!trace) GTEST_SKIP() << "opener not in fixture";
  for (const auto& c : trace->candidates) {
    EXPECT_EQ(c.p_topic, 0.0);
    EXPECT_DOUBLE_EQ(c.combined, c.p_language);
  }
}

TEST(WordGen, RepetitionPenaltyDividesByOnePlusRSquared) {
  // "w" repeated, so every 6-gram in the speech so far is the same one
  const Corpus c = Corpus::build({fixture::speech("a", "RN", "w w w w w w w w w w w w . x ."),
                                  fixture::speech("b", "RN", "w w w w w w w w w w w w w w w w . y .")});
  const Models m{Corpus(c), {.min_corpus_count = 1, .min_significance = 0.0}};
  const auto& idx = m.indexes[cls("RN").index()];
  const WordGenerator gen(m.lms[cls("RN").index()], idx);
  const Tokens five(5, "w");
  for (std::uint32_t r = 0; r <= 3; ++r) {
    Tokens so_far = five;
    for (std::uint32_t i = 0; i < r; ++i) so_far.push_back("w");
    const GenerationState st(idx, so_far);
    const auto trace = gen.score_step(st, config("RN", 0.5, 0));
    ASSERT_TRUE(trace);
    const auto it = std::find_if(trace->candidates.begin(), trace->candidates.end(),
                                 [](const CandidateScore& s) { return s.word == "w"; });
    ASSERT_NE(it, trace->candidates.end());
    EXPECT_EQ(it->repetition_count, r);
    EXPECT_DOUBLE_EQ(it->final_score, it->combined / (1.0 + r * r));
  }
}

TEST(WordGen, ProbabilitiesSumToOne) {
  const auto& m = fixture_models();
  for (const auto& k : kAllClasses) {
    const auto rec = m.generator(k).generate(config(k.code().c_str(), 0.5, 11));
    for (const auto& st : rec.steps) {
      double sum = 0.0;
      for (const auto& c : st.candidates) {
        EXPECT_GE(c.probability, 0.0);
        sum += c.probability;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(WordGen, MatchesReferenceStepDistribution) {
  const auto& m = fixture_models();
  const auto ref = fixture::to_oracle(m.corpus, m.tagged);
  for (const char* code : {"RY", "DN"}) {
    const auto k = cls(code);
    std::vector<std::string> terms;
    for (const auto& t : m.catalogs[k.index()].terms) terms.push_back(t.text());
    const auto rec = m.generator(k).generate(config(code, 0.5, 3));
    Tokens so_far(rec.tokens.begin(), rec.tokens.begin() + kContextLength);
    for (const auto& st : rec.steps) {
      const auto expected = oracle::step_distribution(ref, code, terms, so_far, 0.5, 1e-3);
      ASSERT_EQ(expected.size(), st.candidates.size());
      for (const auto& c : st.candidates) {
        ASSERT_TRUE(expected.count(c.word)) << c.word;
        EXPECT_NEAR(c.probability, expected.at(c.word), 1e-9) << c.word;
      }
      so_far.push_back(st.chosen);
    }
  }
}

TEST(WordGen, SameSeedSameSpeech) {
  const auto& m = fixture_models();
  const auto gen = m.generator(cls("DY"));
  std::set<Tokens> distinct;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = gen.generate(config("DY", 0.5, seed));
    const auto b = gen.generate(config("DY", 0.5, seed));
    EXPECT_EQ(record_to_json(a, true), record_to_json(b, true));
    distinct.insert(a.tokens);
  }
  EXPECT_GT(distinct.size(), 1u);
}

TEST(WordGen, TerminatesAndStaysInsideTrainingWindows) {
  const auto& m = fixture_models();
  for (const auto& k : kAllClasses) {
    const auto gen = m.generator(k);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto cfg = config(k.code().c_str(), 0.5, seed);
      cfg.word_limit = 60;
      const auto rec = gen.generate(cfg);
      EXPECT_LE(rec.tokens.size(), cfg.word_limit);
      EXPECT_EQ(rec.tokens.front(), mk.start);
      EXPECT_TRUE(rec.truncated != (rec.tokens.back() == mk.end));
      for (std::size_t i = 0; i + kOrder <= rec.tokens.size(); ++i) {
        EXPECT_TRUE(occurs_in_class(m.corpus, k, std::span<const std::string>(rec.tokens).subspan(i, kOrder)));
      }
    }
  }
}

TEST(WordGen, TinyLimitTruncates) {
  const auto& m = fixture_models();
  auto cfg = config("RY", 0.5, 1);
  cfg.word_limit = 6;
  const auto rec = m.generator(cls("RY")).generate(cfg);
  EXPECT_TRUE(rec.truncated);
  EXPECT_EQ(rec.tokens.size(), 6u);
  EXPECT_NE(rec.tokens.back(), mk.end);
}

TEST(RecordJson, RoundTrip) {
  const auto& m = fixture_models();
  const auto rec = m.generator(cls("RN")).generate(config("RN", 0.5, 9));
  const std::string text = record_to_json(rec, true);
  const auto back = record_from_json(text);
  EXPECT_EQ(back.tokens, rec.tokens);
  EXPECT_EQ(back.cls, rec.cls);
  EXPECT_EQ(back.truncated, rec.truncated);
  EXPECT_EQ(back.config.seed, rec.config.seed);
  EXPECT_EQ(record_to_json(back, false), record_to_json(rec, false));
  EXPECT_THROW(record_from_json("{\"class\":\"XX\"}"), FormatError);
  EXPECT_THROW(record_from_json("not json"), FormatError);
}
