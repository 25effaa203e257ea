#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace speechgen::cli {

struct IngestOptions {
  std::string source;
  std::string manifest;
  std::string pattern;
  std::string out;
  std::string audit;
  unsigned jobs = 1;
};

struct TrainOptions {
  std::string corpus;
  std::string out;
  std::vector<std::string> lexicons;
  std::string pretagged;
  std::uint64_t min_count = 20;
  double min_significance = 1.0;
  unsigned jobs = 1;
};

struct TopicsOptions {
  std::string model_dir;
  std::size_t top = 10;
};

struct StatsOptions {
  std::string corpus;
  std::string json_out;
};

struct GenerateOptions {
  std::string model_dir;
  std::string corpus;  // overrides the archive recorded by train
  std::string cls;
  std::size_t count = 1;
  double lambda = 0.5;
  double epsilon = 1e-3;
  std::size_t word_limit = 400;
  std::size_t top_k = 3;
  std::uint64_t seed = 0;
  std::string mode = "word";
  double lambda_sim = 0.5;
  double threshold = 0.3;
  std::size_t pool_size = 20;
  std::size_t max_sentences = 40;
  std::string out;
  bool trace = false;
  bool print = false;
  unsigned jobs = 1;
};

struct EvaluateOptions {
  std::string model_dir;
  std::string corpus;
  std::vector<std::string> inputs;       // generation records, or text with --text
  std::vector<std::string> speech_ids;   // corpus speeches
  bool text = false;
  std::string cls;                       // class of --text inputs
  bool normalize = false;
  std::string report_dir;
  std::string manual;
  unsigned jobs = 1;
};

int cmd_ingest(const IngestOptions& o);
int cmd_train(const TrainOptions& o);
int cmd_topics(const TopicsOptions& o);
int cmd_stats(const StatsOptions& o);
int cmd_generate(const GenerateOptions& o);
int cmd_evaluate(const EvaluateOptions& o);

}  // namespace speechgen::cli
