#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include <speechgen/error.hpp>

#include "commands.hpp"
#include "support.hpp"

using namespace speechgen::cli;

int main(int argc, char** argv) {
  CLI::App app{"Class-conditioned political speech generation"};
  app.name("speechgen");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults, one [section] per subcommand")
      ->envname("SPEECHGEN_CONFIG");
  int verbose = 0;
  bool quiet = false;
  unsigned jobs = default_jobs();
  app.add_flag("-v,--verbose", verbose, "More diagnostics on stderr");
  app.add_flag("-q,--quiet", quiet, "Only errors on stderr");
  app.add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Read raw speech files into a corpus archive");
  c_ingest->add_option("--source", ingest.source, "Directory of speech .txt files");
  c_ingest->add_option("--manifest", ingest.manifest, "CSV with header path,party,vote");
  c_ingest->add_option("--pattern", ingest.pattern, "Filename regex with named groups party and vote");
  c_ingest->add_option("-o,--out", ingest.out, "Archive to write")->required();
  c_ingest->add_option("--audit", ingest.audit, "Audit report (default: <out>.audit.json)");

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "Tag the corpus and build models and topic catalogs");
  c_train->add_option("--corpus", train.corpus, "Corpus archive")->required();
  c_train->add_option("-o,--out", train.out, "Model directory")->required();
  c_train->add_option("--lexicon", train.lexicons, "Lexicon file or directory (repeatable)");
  c_train->add_option("--pretagged", train.pretagged, "Externally tagged sentences, one per line");
  c_train->add_option("--min-count", train.min_count, "Minimum corpus count of a topic term")->capture_default_str();
  c_train->add_option("--min-z", train.min_significance, "Significance a topic term must exceed")
      ->capture_default_str();

  TopicsOptions topics;
  auto* c_topics = app.add_subcommand("topics", "Print the top topics per class");
  c_topics->add_option("--model-dir", topics.model_dir, "Model directory")->required();
  c_topics->add_option("--top", topics.top, "Rows per class")->capture_default_str();

  StatsOptions stats;
  auto* c_stats = app.add_subcommand("stats", "Print corpus statistics per class");
  c_stats->add_option("--corpus", stats.corpus, "Corpus archive")->required();
  c_stats->add_option("--json", stats.json_out, "Also write the numbers as JSON");

  GenerateOptions gen;
  auto* c_gen = app.add_subcommand("generate", "Generate speeches for one class");
  c_gen->add_option("--model-dir", gen.model_dir, "Model directory")->required();
  c_gen->add_option("--corpus", gen.corpus, "Corpus archive (default: the one used by train)");
  c_gen->add_option("--class", gen.cls, "Class code: RY, RN, DY or DN")->required();
  c_gen->add_option("-n,--count", gen.count, "Number of speeches")->capture_default_str()->check(CLI::PositiveNumber);
  c_gen->add_option("--lambda", gen.lambda, "Language model weight")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  c_gen->add_option("--epsilon", gen.epsilon, "Topic probability smoothing")->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_gen->add_option("--word-limit", gen.word_limit, "Maximum tokens per speech")->capture_default_str();
  c_gen->add_option("--top-k", gen.top_k, "Topics steering each step")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "Seed of the first speech; speech i uses seed + i")->capture_default_str();
  c_gen->add_option("--mode", gen.mode, "word or sentence")->capture_default_str();
  c_gen->add_option("--lambda-sim", gen.lambda_sim, "Sentence mode: structural weight")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  c_gen->add_option("--threshold", gen.threshold, "Sentence mode: minimum similarity")->capture_default_str();
  c_gen->add_option("--pool-size", gen.pool_size, "Sentence mode: speeches drawn per step")->capture_default_str();
  c_gen->add_option("--max-sentences", gen.max_sentences, "Sentence mode: length cap")->capture_default_str();
  c_gen->add_option("-o,--out", gen.out, "Output directory")->required();
  c_gen->add_flag("--trace", gen.trace, "Store per-step scores in the records");
  c_gen->add_flag("--print", gen.print, "Print the rendered speeches");

  EvaluateOptions ev;
  ev.report_dir = "reports";
  auto* c_eval = app.add_subcommand("evaluate", "Score speeches automatically or aggregate manual score cards");
  c_eval->add_option("inputs", ev.inputs, "Generation records (or text files with --text)");
  c_eval->add_option("--model-dir", ev.model_dir, "Model directory");
  c_eval->add_option("--corpus", ev.corpus, "Corpus archive (default: the one used by train)");
  c_eval->add_option("--speech-id", ev.speech_ids, "Evaluate a corpus speech (repeatable)");
  c_eval->add_flag("--text", ev.text, "Inputs are plain text");
  c_eval->add_option("--class", ev.cls, "Class of plain text inputs");
  c_eval->add_flag("--normalize", ev.normalize, "Divide the content score by the speech's self score");
  c_eval->add_option("--report-dir", ev.report_dir, "Where JSON reports go")->capture_default_str();
  c_eval->add_option("--manual", ev.manual, "JSON-lines manual score cards to aggregate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  set_verbosity(quiet ? 0 : 1 + verbose);
  try {
    if (*c_ingest) return (ingest.jobs = jobs, cmd_ingest(ingest));
    if (*c_train) return (train.jobs = jobs, cmd_train(train));
    if (*c_topics) return cmd_topics(topics);
    if (*c_stats) return cmd_stats(stats);
    if (*c_gen) return (gen.jobs = jobs, cmd_generate(gen));
    if (*c_eval) return (ev.jobs = jobs, cmd_evaluate(ev));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const speechgen::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}
