#pragma once

#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <speechgen/corpus.hpp>
#include <speechgen/postag.hpp>
#include <speechgen/speech_class.hpp>

namespace speechgen::cli {

namespace fs = std::filesystem;

// Bad flags or flag combinations; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

// 0 quiet, 1 normal, 2 verbose.
void set_verbosity(int level);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);
void log_warn(const std::string& msg);

// Writes through a sibling temp file and renames it into place, so readers
// never see a partial file.
void write_file_atomic(const fs::path& path, const std::string& contents);
std::string read_file(const fs::path& path);

void require_file(const fs::path& path, const std::string& what, const std::string& hint = {});

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> threads;
  const std::size_t count = std::min<std::size_t>(jobs, n);
  for (std::size_t t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

unsigned default_jobs();

// Directory written by `train`.
struct ModelDir {
  fs::path root;

  fs::path model(SpeechClass cls) const { return root / "models" / (cls.code() + ".lm.jsonl"); }
  fs::path catalog(SpeechClass cls) const { return root / "catalogs" / (cls.code() + ".topics.jsonl"); }
  fs::path tagged_cache() const { return root / "tagged.cache"; }
  fs::path pos_index() const { return root / "pos_index.txt"; }
  fs::path manifest() const { return root / "train.json"; }
};

// Built-in lexicon directory: source tree first, then the install prefix.
fs::path default_lexicon_dir();
Lexicon load_lexicons(const std::vector<std::string>& paths);

Corpus load_corpus(const fs::path& archive);

}  // namespace speechgen::cli
