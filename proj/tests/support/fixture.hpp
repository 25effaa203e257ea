#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <speechgen/corpus.hpp>
#include <speechgen/postag.hpp>

#include "oracle.hpp"

namespace fixture {

namespace fs = std::filesystem;

struct FixtureFile {
  std::string name;  // Convote-style file name
  std::string text;
};

struct FixtureShape {
  std::uint64_t seed = 1;
  std::array<int, 4> speeches = {30, 12, 12, 30};  // RY RN DY DN
  int min_body = 3;
  int max_body = 9;
  bool add_single_sentence = true;  // one file per class that cleaning removes
  bool add_unlabeled = true;        // one file the filename rule cannot label
};

// Deterministic synthetic floor-debate speeches. Each class leans on its own
// handful of multiword topics so that extraction has something to find.
std::vector<FixtureFile> make_files(const FixtureShape& shape = {});
void write_dir(const fs::path& dir, const FixtureShape& shape = {});

// Ingested, cleaned and built in memory; removed and unlabeled files are
// dropped the same way the pipeline drops them.
speechgen::Corpus make_corpus(const FixtureShape& shape = {});

// Tagger over the bundled lexicon.
const speechgen::LexiconTagger& bundled_tagger();

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Speech built from a string of space-separated tokens, with `.` standing for
// the stop marker and start/end markers added around it.
speechgen::TokenizedSpeech speech(const std::string& id, const std::string& cls, const std::string& text);

// Plain-string copy for the reference computations.
std::vector<oracle::Speech> to_oracle(const speechgen::Corpus& corpus, const speechgen::TaggedCorpus& tagged);

}  // namespace fixture
