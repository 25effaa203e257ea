#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include <speechgen/corpus.hpp>
#include <speechgen/error.hpp>
#include <speechgen/evaluation.hpp>
#include <speechgen/generator.hpp>
#include <speechgen/langmodel.hpp>
#include <speechgen/postag.hpp>
#include <speechgen/topicmodel.hpp>

#include "support.hpp"

namespace speechgen::cli {

using nlohmann::json;

namespace {

SpeechClass class_or_usage(const std::string& code) {
  const auto cls = SpeechClass::parse(code);
  if (!cls) throw UsageError("unknown class code '" + code + "' (expected RY, RN, DY or DN)");
  return *cls;
}

// What train recorded about its inputs.
struct TrainManifest {
  fs::path corpus;
  std::vector<std::string> lexicons;
  bool pretagged = false;
};

TrainManifest read_manifest(const ModelDir& dir) {
  require_file(dir.manifest(), "training manifest", "run `speechgen train` first");
  TrainManifest m;
  try {
    const auto j = json::parse(read_file(dir.manifest()));
    m.corpus = j.at("corpus").get<std::string>();
    m.lexicons = j.at("lexicons").get<std::vector<std::string>>();
    m.pretagged = !j.value("pretagged", std::string()).empty();
  } catch (const json::exception& e) {
    throw FormatError("malformed " + dir.manifest().string() + ": " + e.what());
  }
  return m;
}

TopicCatalog load_catalog(const ModelDir& dir, SpeechClass cls) {
  require_file(dir.catalog(cls), "topic catalog for " + cls.code(), "run `speechgen train` first");
  std::ifstream in(dir.catalog(cls));
  return read_catalog(in, cls);
}

std::string safe_name(std::string id) {
  std::replace(id.begin(), id.end(), '/', '_');
  std::replace(id.begin(), id.end(), '\\', '_');
  return id;
}

// Marked token stream for free text. Unlike preprocess this accepts a
// single sentence.
std::vector<std::string> mark_text(const std::string& text) {
  PreprocessOptions opts;
  const auto& mk = opts.markers;
  std::vector<std::string> out{mk.start};
  bool open = false;
  for (auto& w : tokenize_text(text, opts)) {
    if (w == "." || w == "!" || w == "?") {
      if (open) out.push_back(mk.stop);
      open = false;
    } else if (!mk.is_marker(w)) {
      out.push_back(std::move(w));
      open = true;
    }
  }
  if (open) out.push_back(mk.stop);
  out.push_back(mk.end);
  return out;
}

}  // namespace

int cmd_ingest(const IngestOptions& o) {
  if (o.source.empty() == o.manifest.empty()) throw UsageError("give exactly one of --source or --manifest");

  IngestResult raw;
  if (!o.manifest.empty()) {
    require_file(o.manifest, "manifest");
    raw = ingest({}, ManifestRule{o.manifest});
  } else {
    require_file(o.source, "source directory");
    raw = ingest(o.source, o.pattern.empty() ? convote_filename_rule() : FilenameRule{o.pattern});
  }

  std::vector<std::optional<TokenizedSpeech>> cleaned(raw.speeches.size());
  parallel_for(raw.speeches.size(), o.jobs, [&](std::size_t i) { cleaned[i] = preprocess(raw.speeches[i]); });

  IngestAudit audit;
  audit.ingested = raw.speeches.size();
  audit.skipped = raw.skipped;
  std::vector<TokenizedSpeech> kept;
  for (std::size_t i = 0; i < cleaned.size(); ++i) {
    if (cleaned[i]) kept.push_back(std::move(*cleaned[i]));
    else audit.removed.push_back(raw.speeches[i].id);
  }
  audit.retained = kept.size();
  const Corpus corpus = Corpus::build(std::move(kept));

  std::ostringstream archive;
  write_archive(archive, corpus);
  const fs::path audit_path = o.audit.empty() ? fs::path(o.out + ".audit.json") : fs::path(o.audit);
  write_file_atomic(o.out, archive.str());
  write_file_atomic(audit_path, audit.to_json());

  log_info("ingested " + std::to_string(audit.ingested) + ", removed " + std::to_string(audit.removed.size()) +
           ", skipped " + std::to_string(audit.skipped.size()) + ", retained " + std::to_string(audit.retained));
  return kOk;
}

int cmd_train(const TrainOptions& o) {
  const ModelDir dir{o.out};
  std::vector<std::string> lexicons = o.lexicons;
  if (lexicons.empty()) lexicons.push_back(default_lexicon_dir().string());
  for (auto& l : lexicons) {
    require_file(l, "lexicon");
    l = fs::absolute(l).lexically_normal().string();
  }
  if (!o.pretagged.empty()) require_file(o.pretagged, "pre-tagged corpus");

  const Corpus corpus = load_corpus(o.corpus);
  const LexiconTagger tagger(load_lexicons(lexicons));

  TaggedCorpus tagged;
  if (!o.pretagged.empty()) {
    std::ifstream in(o.pretagged);
    tagged = load_pretagged(in, corpus);
  } else {
    std::vector<std::vector<TaggedSentence>> by_speech(corpus.size());
    parallel_for(corpus.size(), o.jobs, [&](std::size_t i) {
      const auto& sp = corpus.speeches()[i];
      for (std::size_t k = 0; k < sp.sentences.size(); ++k) {
        by_speech[i].push_back(tagger.tag_sentence(sp.sentence_words(k)));
      }
    });
    tagged = TaggedCorpus(std::move(by_speech));
  }
  log_debug("tagged " + std::to_string(tagged.sentence_count()) + " sentences");

  ExtractionOptions ex;
  ex.min_corpus_count = o.min_count;
  ex.min_significance = o.min_significance;
  const TopicExtraction topics = extract_terms(corpus, tagged, ex);

  json classes = json::object();
  std::vector<std::string> warnings(kClassCount);
  parallel_for(kClassCount, o.jobs, [&](std::size_t c) {
    const SpeechClass cls = kAllClasses[c];
    if (corpus.class_members(cls).empty()) {
      std::error_code ec;
      fs::remove(dir.model(cls), ec);
      fs::remove(dir.catalog(cls), ec);
      warnings[c] = "class " + cls.code() + " has no speeches; model skipped";
      return;
    }
    std::ostringstream model, catalog;
    NGramModel::train(corpus, cls).save(model);
    write_catalog(catalog, topics.catalogs[c]);
    write_file_atomic(dir.model(cls), model.str());
    write_file_atomic(dir.catalog(cls), catalog.str());
  });
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const SpeechClass cls = kAllClasses[c];
    if (!warnings[c].empty()) log_warn(warnings[c]);
    classes[cls.code()] = {{"speeches", corpus.class_members(cls).size()},
                           {"trained", warnings[c].empty()},
                           {"topics", topics.catalogs[c].terms.size()}};
  }

  std::ostringstream cache, index;
  tagged.write_cache(cache, corpus);
  PosIndex::build(tagged).save(index);
  write_file_atomic(dir.tagged_cache(), cache.str());
  write_file_atomic(dir.pos_index(), index.str());

  json manifest;
  manifest["corpus"] = fs::absolute(o.corpus).lexically_normal().string();
  manifest["lexicons"] = lexicons;
  manifest["pretagged"] = o.pretagged.empty() ? "" : fs::absolute(o.pretagged).lexically_normal().string();
  manifest["min_count"] = o.min_count;
  manifest["min_significance"] = o.min_significance;
  manifest["order"] = kOrder;
  manifest["classes"] = std::move(classes);
  write_file_atomic(dir.manifest(), manifest.dump(2) + "\n");

  log_info("trained " + std::to_string(corpus.size()) + " speeches into " + dir.root.string());
  return kOk;
}

int cmd_topics(const TopicsOptions& o) {
  const ModelDir dir{o.model_dir};
  if (!fs::is_directory(dir.root)) throw IngestError("model directory not found: " + dir.root.string());
  std::vector<TopicCatalog> catalogs;
  for (const auto& cls : kAllClasses) {
    if (fs::exists(dir.catalog(cls))) {
      catalogs.push_back(load_catalog(dir, cls));
    } else {
      catalogs.push_back(TopicCatalog{cls, {}});
    }
  }
  std::cout << render_topics_table(catalogs, o.top);
  return kOk;
}

int cmd_stats(const StatsOptions& o) {
  const Corpus corpus = load_corpus(o.corpus);
  const CorpusStats st = stats(corpus);
  std::cout << render_stats_table(st);
  if (!o.json_out.empty()) {
    json j = json::object();
    auto row = [](const ClassStats& c) {
      return json{{"speeches", c.speeches},
                  {"sentences", c.sentences},
                  {"words", c.words},
                  {"sentences_per_speech", c.sentences_per_speech()},
                  {"words_per_sentence", c.words_per_sentence()}};
    };
    for (const auto& cls : kAllClasses) j[cls.code()] = row(st.per_class[cls.index()]);
    j["total"] = row(st.total);
    write_file_atomic(o.json_out, j.dump(2) + "\n");
  }
  return kOk;
}

int cmd_generate(const GenerateOptions& o) {
  const SpeechClass cls = class_or_usage(o.cls);
  const auto mode = parse_mode(o.mode);
  if (!mode) throw UsageError("unknown mode '" + o.mode + "' (expected word or sentence)");

  GenerationConfig config;
  config.cls = cls;
  config.lambda = o.lambda;
  config.epsilon = o.epsilon;
  config.word_limit = o.word_limit;
  config.top_k_topics = o.top_k;
  config.mode = *mode;
  config.record_trace = o.trace;
  SentenceSimConfig sim;
  sim.lambda_sim = o.lambda_sim;
  sim.similarity_threshold = o.threshold;
  sim.pool_size = o.pool_size;
  sim.max_sentences = o.max_sentences;
  try {
    config.validate();
    sim.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  const ModelDir dir{o.model_dir};
  const TrainManifest manifest = read_manifest(dir);
  const fs::path corpus_path = o.corpus.empty() ? manifest.corpus : fs::path(o.corpus);
  if (*mode == GenerationMode::WordBased) {
    require_file(dir.model(cls), "language model for " + cls.code(), "run `speechgen train` first");
    require_file(dir.catalog(cls), "topic catalog for " + cls.code(), "run `speechgen train` first");
  } else {
    require_file(dir.tagged_cache(), "tagged corpus cache", "run `speechgen train` first");
  }
  const Corpus corpus = load_corpus(corpus_path);

  std::vector<GenerationRecord> records(o.count);
  if (*mode == GenerationMode::WordBased) {
    std::ifstream lm_in(dir.model(cls));
    const NGramModel lm = NGramModel::load(lm_in);
    if (!(lm.speech_class() == cls)) throw FormatError(dir.model(cls).string() + " holds another class");
    const TopicIndex topics(corpus, load_catalog(dir, cls));
    parallel_for(o.count, o.jobs, [&](std::size_t i) {
      const WordGenerator gen(lm, topics, corpus.markers());
      GenerationConfig c = config;
      c.seed = o.seed + i;
      records[i] = gen.generate(c);
    });
  } else {
    std::ifstream cache_in(dir.tagged_cache());
    const TaggedCorpus tagged = TaggedCorpus::read_cache(cache_in, corpus);
    parallel_for(o.count, o.jobs, [&](std::size_t i) {
      records[i] = generate_sentence_based(corpus, tagged, cls, sim, o.seed + i);
    });
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    const fs::path path = fs::path(o.out) / (cls.code() + "_" + std::to_string(o.seed + i) + ".json");
    write_file_atomic(path, record_to_json(records[i], o.trace, corpus.markers()));
    if (records[i].truncated) log_warn(path.string() + " stopped before the end marker");
    if (o.print) std::cout << "# " << path.string() << '\n' << records[i].rendered_text(corpus.markers()) << '\n';
    else std::cout << path.string() << '\n';
  }
  return kOk;
}

int cmd_evaluate(const EvaluateOptions& o) {
  if (!o.manual.empty()) {
    require_file(o.manual, "score card file");
    std::ifstream in(o.manual);
    const auto cards = read_score_cards(in);
    const ManualSummary summary = aggregate_manual(cards);
    std::cout << render_manual_table(summary);
    if (!o.report_dir.empty()) {
      json j;
      j["cards"] = cards.size();
      j["criterion_means"] = summary.criterion_means;
      j["mean_total"] = summary.mean_total;
      write_file_atomic(fs::path(o.report_dir) / "manual_summary.json", j.dump(2) + "\n");
    }
    if (o.inputs.empty() && o.speech_ids.empty()) return kOk;
  }
  if (o.inputs.empty() && o.speech_ids.empty()) throw UsageError("nothing to evaluate");
  if (o.text && o.cls.empty()) throw UsageError("--text needs --class");
  if (o.model_dir.empty()) throw UsageError("--model-dir is required");

  const ModelDir dir{o.model_dir};
  const TrainManifest manifest = read_manifest(dir);
  require_file(dir.pos_index(), "POS index", "run `speechgen train` first");
  for (const auto& in : o.inputs) require_file(in, "speech file");
  const Corpus corpus = load_corpus(o.corpus.empty() ? manifest.corpus : fs::path(o.corpus));
  if (manifest.pretagged) log_warn("reference tags came from a pre-tagged file; generated text uses the lexicon tagger");
  const LexiconTagger tagger(load_lexicons(manifest.lexicons));
  PosIndex index;
  {
    std::ifstream in(dir.pos_index());
    index = PosIndex::load(in);
  }

  struct Item {
    std::string name;
    SpeechClass cls;
    std::vector<std::string> tokens;
  };
  std::vector<Item> items;
  for (const auto& path : o.inputs) {
    const std::string text = read_file(path);
    if (o.text) {
      items.push_back({fs::path(path).stem().string(), class_or_usage(o.cls), mark_text(text)});
    } else {
      const GenerationRecord rec = record_from_json(text);
      items.push_back({fs::path(path).stem().string(), rec.cls, rec.tokens});
    }
  }
  for (const auto& id : o.speech_ids) {
    const TokenizedSpeech* sp = corpus.find(id);
    if (!sp) throw IngestError("no speech with id '" + id + "' in the corpus");
    items.push_back({id, sp->cls, sp->tokens});
  }

  std::map<std::size_t, std::unique_ptr<TopicIndex>> indexes;
  for (const auto& it : items) {
    auto& slot = indexes[it.cls.index()];
    if (!slot) slot = std::make_unique<TopicIndex>(corpus, load_catalog(dir, it.cls));
  }

  ContentOptions copts;
  copts.normalize_by_self_score = o.normalize;
  std::vector<AutoEvalReport> reports(items.size());
  parallel_for(items.size(), o.jobs, [&](std::size_t i) {
    const auto& it = items[i];
    reports[i].speech_id = it.name;
    reports[i].grammar = grammar_eval(it.tokens, tagger, index, corpus.markers());
    reports[i].content = content_eval(it.tokens, *indexes.at(it.cls.index()), copts);
  });

  std::cout << render_auto_table(reports);
  if (!o.report_dir.empty()) {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& topics = *indexes.at(items[i].cls.index());
      write_file_atomic(fs::path(o.report_dir) / (safe_name(items[i].name) + ".eval.json"),
                        reports[i].to_json(&topics));
    }
  }
  for (const auto& r : reports) {
    for (const auto& s : r.grammar.unmatched) log_debug(r.speech_id + ": no tag match: " + s);
  }
  return kOk;
}

}  // namespace speechgen::cli
