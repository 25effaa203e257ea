#include "speechgen/generator.hpp"

#include <algorithm>

#include "speechgen/error.hpp"

namespace speechgen {

namespace {

std::string six_gram_key(std::span<const std::string> window) {
  std::string key;
  for (const auto& t : window) {
    key += t;
    key += '\x1f';
  }
  return key;
}

}  // namespace

std::string_view mode_name(GenerationMode mode) {
  return mode == GenerationMode::WordBased ? "word" : "sentence";
}

std::optional<GenerationMode> parse_mode(std::string_view name) {
  if (name == "word") return GenerationMode::WordBased;
  if (name == "sentence") return GenerationMode::SentenceBased;
  return std::nullopt;
}

void GenerationConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
  if (word_limit < kOrder) throw ValidationError("word limit must be at least 6");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (top_k_topics == 0) throw ValidationError("top_k_topics must be positive");
}

GenerationState::GenerationState(const TopicIndex& topics, std::span<const std::string> opener)
    : topics_(&topics), term_counts_(topics.term_count(), 0) {
  for (const auto& t : opener) push(t);
}

std::span<const std::string> GenerationState::context() const {
  const std::span<const std::string> all(tokens_);
  if (all.size() < kContextLength) return all;
  return all.subspan(all.size() - kContextLength);
}

std::uint32_t GenerationState::repetitions(const std::string& word) const {
  if (tokens_.size() < kContextLength) return 0;
  std::string key = six_gram_key(context());
  key += word;
  key += '\x1f';
  auto it = six_grams_.find(key);
  return it == six_grams_.end() ? 0 : it->second;
}

void GenerationState::push(std::string token) {
  tokens_.push_back(std::move(token));
  const std::span<const std::string> all(tokens_);
  if (all.size() >= kOrder) six_grams_[six_gram_key(all.subspan(all.size() - kOrder))] += 1;
  for (std::size_t len = 2; len <= 3 && len <= all.size(); ++len) {
    if (auto t = topics_->find_term(all.subspan(all.size() - len))) term_counts_[*t] += 1;
  }
}

WordGenerator::WordGenerator(const NGramModel& language_model, const TopicIndex& topics, const Markers& markers)
    : lm_(&language_model), topics_(&topics), markers_(markers) {
  if (!(language_model.speech_class() == topics.speech_class())) {
    throw ValidationError("language model and topic catalog belong to different classes");
  }
}

std::optional<StepTrace> WordGenerator::score_step(const GenerationState& state,
                                                   const GenerationConfig& config) const {
  const auto context = state.context();
  const auto ids = lm_->to_ids(context);
  if (!ids) return std::nullopt;
  const auto* entry = lm_->find(*ids);
  if (!entry) return std::nullopt;

  StepTrace trace;
  trace.context.assign(context.begin(), context.end());
  const auto topics = topics_->current_from_counts(state.term_counts(), config.top_k_topics);
  for (const auto& w : topics) {
    trace.topics.push_back({topics_->term(w.term).text(), w.coverage, w.probability});
  }

  std::vector<std::string> words;
  words.reserve(entry->successors.size());
  for (const auto& s : entry->successors) words.push_back(lm_->token(s.token));

  std::vector<double> p_topic(words.size(), 0.0);
  double topic_mass = 0.0;
  if (!topics.empty()) {
    std::vector<std::size_t> key;
    for (const auto& w : topics) key.push_back(w.term);
    std::sort(key.begin(), key.end());
    auto it = weight_cache_.find(key);
    if (it == weight_cache_.end()) it = weight_cache_.emplace(key, topics_->speech_weights(topics)).first;
    p_topic = topics_->p_topic_weighted(words, it->second, config.epsilon);
    for (double p : p_topic) topic_mass += p;
    if (topic_mass > 0.0) {
      for (double& p : p_topic) p /= topic_mass;
    }
  }
  const bool topic_active = topic_mass > 0.0;

  double total = 0.0;
  trace.candidates.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    CandidateScore c;
    c.word = words[i];
    c.p_language = static_cast<double>(entry->successors[i].count) / static_cast<double>(entry->total);
    c.p_topic = p_topic[i];
    c.combined = topic_active ? config.lambda * c.p_language + (1.0 - config.lambda) * c.p_topic : c.p_language;
    c.repetition_count = state.repetitions(c.word);
    const double r = static_cast<double>(c.repetition_count);
    c.final_score = c.combined / (1.0 + r * r);
    total += c.final_score;
    trace.candidates.push_back(std::move(c));
  }
  if (total > 0.0) {
    for (auto& c : trace.candidates) c.probability = c.final_score / total;
  } else {
    trace.uniform_fallback = true;
    for (auto& c : trace.candidates) c.probability = 1.0 / static_cast<double>(trace.candidates.size());
  }
  return trace;
}

std::optional<std::string> WordGenerator::step(GenerationState& state, const GenerationConfig& config, Rng& rng,
                                               StepTrace* trace) const {
  auto scored = score_step(state, config);
  if (!scored) return std::nullopt;
  std::vector<double> weights;
  weights.reserve(scored->candidates.size());
  for (const auto& c : scored->candidates) weights.push_back(c.probability);
  std::string chosen = scored->candidates[rng.categorical(weights)].word;
  scored->chosen = chosen;
  state.push(chosen);
  if (trace) *trace = std::move(*scored);
  return chosen;
}

GenerationRecord WordGenerator::generate(const GenerationConfig& config) const {
  config.validate();
  if (!(config.cls == lm_->speech_class())) throw ValidationError("configured class does not match the models");
  Rng rng(config.seed);
  const auto opener = lm_->sample_opener(rng);
  GenerationState state(*topics_, opener);

  GenerationRecord record;
  record.cls = config.cls;
  record.mode = GenerationMode::WordBased;
  record.config = config;
  while (state.tokens().back() != markers_.end) {
    if (state.tokens().size() >= config.word_limit) {
      record.truncated = true;
      break;
    }
    StepTrace trace;
    if (!step(state, config, rng, config.record_trace ? &trace : nullptr)) {
      record.truncated = true;
      break;
    }
    if (config.record_trace) record.steps.push_back(std::move(trace));
  }
  record.tokens = state.tokens();
  return record;
}

}  // namespace speechgen
