#include <json.hpp>

#include "speechgen/error.hpp"
#include "speechgen/generator.hpp"

namespace speechgen {

using nlohmann::json;

std::string record_to_json(const GenerationRecord& record, bool with_trace, const Markers& markers) {
  json j;
  j["class"] = record.cls.code();
  j["mode"] = mode_name(record.mode);
  json cfg;
  cfg["lambda"] = record.config.lambda;
  cfg["epsilon"] = record.config.epsilon;
  cfg["word_limit"] = record.config.word_limit;
  cfg["top_k_topics"] = record.config.top_k_topics;
  cfg["seed"] = record.config.seed;
  if (record.sentence_config) {
    const auto& s = *record.sentence_config;
    cfg["lambda_sim"] = s.lambda_sim;
    cfg["pool_size"] = s.pool_size;
    cfg["similarity_threshold"] = s.similarity_threshold;
    cfg["max_sentences"] = s.max_sentences;
  }
  j["config"] = std::move(cfg);
  j["tokens"] = record.tokens;
  j["rendered_text"] = record.rendered_text(markers);
  j["truncated"] = record.truncated;
  if (with_trace) {
    json trace = json::array();
    for (const auto& st : record.steps) {
      json step;
      step["context"] = st.context;
      json topics = json::array();
      for (const auto& t : st.topics) {
        topics.push_back({{"term", t.term}, {"coverage", t.coverage}, {"probability", t.probability}});
      }
      step["topics"] = std::move(topics);
      json cands = json::array();
      for (const auto& c : st.candidates) {
        cands.push_back({{"word", c.word},
                         {"p_language", c.p_language},
                         {"p_topic", c.p_topic},
                         {"combined", c.combined},
                         {"repetitions", c.repetition_count},
                         {"final", c.final_score},
                         {"probability", c.probability}});
      }
      step["candidates"] = std::move(cands);
      step["chosen"] = st.chosen;
      step["uniform_fallback"] = st.uniform_fallback;
      trace.push_back(std::move(step));
    }
    for (const auto& p : record.picks) {
      trace.push_back({{"speech", p.source_speech},
                       {"sentence", p.sentence},
                       {"similarity", p.similarity},
                       {"fallback", p.fallback}});
    }
    j["trace"] = std::move(trace);
  }
  return j.dump(2) + "\n";
}

GenerationRecord record_from_json(std::string_view text) {
  GenerationRecord r;
  try {
    const auto j = json::parse(text);
    const auto cls = SpeechClass::parse(j.at("class").get<std::string>());
    if (!cls) throw FormatError("unknown class in generation record");
    r.cls = *cls;
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw FormatError("unknown mode in generation record");
    r.mode = *mode;
    r.tokens = j.at("tokens").get<std::vector<std::string>>();
    r.truncated = j.value("truncated", false);
    r.config.cls = r.cls;
    r.config.mode = r.mode;
    if (j.contains("config")) {
      const auto& c = j["config"];
      r.config.lambda = c.value("lambda", r.config.lambda);
      r.config.epsilon = c.value("epsilon", r.config.epsilon);
      r.config.word_limit = c.value("word_limit", r.config.word_limit);
      r.config.top_k_topics = c.value("top_k_topics", r.config.top_k_topics);
      r.config.seed = c.value("seed", r.config.seed);
      if (r.mode == GenerationMode::SentenceBased) {
        SentenceSimConfig s;
        s.lambda_sim = c.value("lambda_sim", s.lambda_sim);
        s.pool_size = c.value("pool_size", s.pool_size);
        s.similarity_threshold = c.value("similarity_threshold", s.similarity_threshold);
        s.max_sentences = c.value("max_sentences", s.max_sentences);
        r.sentence_config = s;
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed generation record: ") + e.what());
  }
  if (r.tokens.empty()) throw FormatError("generation record has no tokens");
  return r;
}

}  // namespace speechgen
