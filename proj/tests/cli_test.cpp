#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixture.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string output;  // stdout and stderr
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

CliResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + quote(SPEECHGEN_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

// One ingested and trained fixture shared by the suite.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fixture::TempDir();
    fixture::write_dir(root() / "raw");
    const CliResult a = run("-q ingest --source " + quote((root() / "raw").string()) + " -o " + quote(archive().string()));
    ASSERT_EQ(a.code, 0) << a.output;
    const CliResult t = run("-q train --corpus " + quote(archive().string()) + " -o " + quote(models().string()));
    ASSERT_EQ(t.code, 0) << t.output;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static fs::path root() { return dir_->path(); }
  static fs::path archive() { return root() / "corpus.jsonl"; }
  static fs::path models() { return root() / "models"; }

  inline static fixture::TempDir* dir_ = nullptr;
};

}  // namespace

TEST_F(Cli, IngestWritesOneLinePerRetainedSpeech) {
  EXPECT_EQ(line_count(archive()), fixture::make_corpus().size());
  const auto audit = nlohmann::json::parse(slurp(archive().string() + ".audit.json"));
  EXPECT_EQ(audit.at("retained").get<std::size_t>(), line_count(archive()));
  EXPECT_EQ(audit.at("removed").size(), 4u);
}

TEST_F(Cli, BadManifestLeavesNoArchive) {
  const fs::path manifest = root() / "bad.csv";
  std::ofstream(manifest) << "path,party,vote\nmissing.txt,D,Y\n";
  const fs::path out = root() / "never.jsonl";
  const CliResult r = run("-q ingest --manifest " + quote(manifest.string()) + " -o " + quote(out.string()));
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out.string() + ".audit.json"));
}

TEST_F(Cli, IngestNeedsExactlyOneSource) {
  EXPECT_EQ(run("ingest -o " + quote((root() / "x.jsonl").string())).code, 1);
}

TEST_F(Cli, TrainWritesModelsAndCatalogsDeterministically) {
  std::size_t models_n = 0, catalogs_n = 0;
  for (const auto& e : fs::directory_iterator(models() / "models")) models_n += e.path().extension() == ".jsonl";
  for (const auto& e : fs::directory_iterator(models() / "catalogs")) catalogs_n += e.path().extension() == ".jsonl";
  EXPECT_EQ(models_n, 4u);
  EXPECT_EQ(catalogs_n, 4u);
  EXPECT_TRUE(fs::exists(models() / "pos_index.txt"));

  const fs::path again = root() / "models_again";
  ASSERT_EQ(run("-q train --corpus " + quote(archive().string()) + " -o " + quote(again.string())).code, 0);
  for (const char* rel : {"models/DN.lm.jsonl", "models/RY.lm.jsonl", "catalogs/DN.topics.jsonl",
                          "catalogs/RN.topics.jsonl", "pos_index.txt", "tagged.cache"}) {
    EXPECT_EQ(slurp(models() / rel), slurp(again / rel)) << rel;
  }
}

TEST_F(Cli, EmptyClassIsSkippedWithWarning) {
  const fs::path raw = root() / "no_rn";
  fixture::FixtureShape shape;
  shape.speeches = {6, 0, 4, 6};
  shape.add_single_sentence = false;
  fixture::write_dir(raw, shape);
  const fs::path arch = root() / "no_rn.jsonl";
  ASSERT_EQ(run("-q ingest --source " + quote(raw.string()) + " -o " + quote(arch.string())).code, 0);
  const fs::path out = root() / "no_rn_models";
  const CliResult r = run("train --corpus " + quote(arch.string()) + " -o " + quote(out.string()) + " --min-count 2");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("RN"), std::string::npos);
  EXPECT_NE(r.output.find("warning"), std::string::npos);
  EXPECT_FALSE(fs::exists(out / "models/RN.lm.jsonl"));
  EXPECT_TRUE(fs::exists(out / "models/DN.lm.jsonl"));
}

TEST_F(Cli, TrainWithoutArchiveFails) {
  const CliResult r = run("-q train --corpus " + quote((root() / "nope.jsonl").string()) + " -o " +
                    quote((root() / "m2").string()));
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, GenerateSameSeedSameBytes) {
  const fs::path a = root() / "gen_a", b = root() / "gen_b";
  const std::string common = "-q generate --model-dir " + quote(models().string()) + " --class DN --count 3 --seed 7";
  ASSERT_EQ(run(common + " -o " + quote(a.string())).code, 0);
  ASSERT_EQ(run(common + " -o " + quote(b.string())).code, 0);
  for (int i = 7; i < 10; ++i) {
    const std::string name = "DN_" + std::to_string(i) + ".json";
    ASSERT_TRUE(fs::exists(a / name));
    EXPECT_EQ(slurp(a / name), slurp(b / name));
  }
}

TEST_F(Cli, GeneratePrintsText) {
  const CliResult r = run("-q generate --model-dir " + quote(models().string()) + " --class RY --print -o " +
                    quote((root() / "gen_print").string()));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find(" ."), std::string::npos);
  EXPECT_EQ(r.output.find("__START__"), std::string::npos);
}

TEST_F(Cli, GenerateSentenceMode) {
  const CliResult r = run("-q generate --model-dir " + quote(models().string()) + " --class DY --mode sentence -o " +
                    quote((root() / "gen_sent").string()));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto j = nlohmann::json::parse(slurp(root() / "gen_sent/DY_0.json"));
  EXPECT_EQ(j.at("mode"), "sentence");
}

TEST_F(Cli, GenerateRejectsBadArguments) {
  const std::string base = "generate --model-dir " + quote(models().string()) + " -o " + quote((root() / "g").string());
  EXPECT_EQ(run(base + " --class DN --lambda 1.5").code, 1);
  EXPECT_EQ(run(base + " --class XX").code, 1);
  EXPECT_EQ(run(base + " --class DN --mode rnn").code, 1);
  EXPECT_EQ(run(base).code, 1);
}

TEST_F(Cli, EvaluateTrainingSpeechScoresFullGrammar) {
  const auto corpus = fixture::make_corpus();
  const std::string id = corpus.speeches()[0].id;
  const fs::path reports = root() / "reports";
  const CliResult r = run("-q evaluate --model-dir " + quote(models().string()) + " --speech-id " + quote(id) +
                    " --report-dir " + quote(reports.string()));
  ASSERT_EQ(r.code, 0) << r.output;
  bool found = false;
  for (const auto& e : fs::directory_iterator(reports)) {
    const auto j = nlohmann::json::parse(slurp(e.path()));
    if (j.at("speech_id") != id) continue;
    found = true;
    EXPECT_DOUBLE_EQ(j.at("grammar_score").get<double>(), 1.0);
    EXPECT_TRUE(j.at("unmatched_sentences").empty());
  }
  EXPECT_TRUE(found);
}

TEST_F(Cli, EvaluateGeneratedRecords) {
  const fs::path gen = root() / "gen_eval";
  ASSERT_EQ(run("-q generate --model-dir " + quote(models().string()) + " --class RY --count 2 -o " +
                quote(gen.string())).code, 0);
  const CliResult r = run("-q evaluate --model-dir " + quote(models().string()) + " " + quote((gen / "RY_0.json").string()) +
                    " " + quote((gen / "RY_1.json").string()) + " --report-dir " + quote((root() / "rep2").string()));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("RY_0"), std::string::npos);
}

TEST_F(Cli, EvaluateWithoutIndexPointsAtTrain) {
  const fs::path empty = root() / "empty_models";
  fs::create_directories(empty);
  const CliResult r = run("-q evaluate --model-dir " + quote(empty.string()) + " --speech-id x");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.output.find("train"), std::string::npos);
}

TEST_F(Cli, EvaluateMalformedRecordFails) {
  const fs::path bad = root() / "bad.json";
  std::ofstream(bad) << "{ this is not json";
  const CliResult r = run("-q evaluate --model-dir " + quote(models().string()) + " " + quote(bad.string()));
  EXPECT_NE(r.code, 0);
}

TEST_F(Cli, EvaluateManualCards) {
  const CliResult r = run("-q evaluate --manual " + quote(std::string(SPEECHGEN_TEST_DATA_DIR) + "/published_cards.jsonl") +
                    " --report-dir " + quote((root() / "manual").string()));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("8.1"), std::string::npos);
  EXPECT_TRUE(fs::exists(root() / "manual/manual_summary.json"));
}

TEST_F(Cli, StatsAndTopics) {
  const CliResult s = run("stats --corpus " + quote(archive().string()));
  ASSERT_EQ(s.code, 0) << s.output;
  for (const char* c : {"RY", "RN", "DY", "DN"}) EXPECT_NE(s.output.find(c), std::string::npos);
  const CliResult t = run("topics --model-dir " + quote(models().string()) + " --top 5");
  ASSERT_EQ(t.code, 0) << t.output;
  EXPECT_NE(t.output.find("Total:"), std::string::npos);
}

TEST_F(Cli, StatsOfEmptyCorpus) {
  const fs::path empty = root() / "empty.jsonl";
  std::ofstream{empty};
  const CliResult s = run("stats --corpus " + quote(empty.string()));
  EXPECT_EQ(s.code, 0) << s.output;
}

TEST_F(Cli, ConfigFileAndEnvironment) {
  const fs::path cfg = root() / "gen.toml";
  std::ofstream(cfg) << "[generate]\nseed = 7\nclass = \"DN\"\n";
  const std::string base = "-q generate --model-dir " + quote(models().string());
  ASSERT_EQ(run(base + " --class DN --seed 7 -o " + quote((root() / "cfg_flag").string())).code, 0);
  const CliResult f = run("--config " + quote(cfg.string()) + " " + base + " -o " + quote((root() / "cfg_file").string()));
  ASSERT_EQ(f.code, 0) << f.output;
  const CliResult e = run(base + " -o " + quote((root() / "cfg_env").string()), "SPEECHGEN_CONFIG=" + quote(cfg.string()));
  ASSERT_EQ(e.code, 0) << e.output;
  const std::string expected = slurp(root() / "cfg_flag/DN_7.json");
  EXPECT_EQ(slurp(root() / "cfg_file/DN_7.json"), expected);
  EXPECT_EQ(slurp(root() / "cfg_env/DN_7.json"), expected);
}

TEST_F(Cli, HelpForEverySubcommand) {
  EXPECT_EQ(run("--help").code, 0);
  for (const char* sub : {"ingest", "train", "topics", "stats", "generate", "evaluate"}) {
    const CliResult r = run(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.output.find("--"), std::string::npos) << sub;
  }
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}
