#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <speechgen/error.hpp>

namespace speechgen::cli {

namespace {

int g_verbosity = 1;
std::mutex g_log_mu;

void emit(const char* prefix, const std::string& msg) {
  std::lock_guard lock(g_log_mu);
  std::cerr << prefix << msg << '\n';
}

}  // namespace

void set_verbosity(int level) { g_verbosity = level; }
void log_info(const std::string& msg) {
  if (g_verbosity >= 1) emit("", msg);
}
void log_debug(const std::string& msg) {
  if (g_verbosity >= 2) emit("debug: ", msg);
}
void log_warn(const std::string& msg) {
  if (g_verbosity >= 1) emit("warning: ", msg);
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IngestError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require_file(const fs::path& path, const std::string& what, const std::string& hint) {
  if (fs::exists(path)) return;
  std::string msg = what + " not found: " + path.string();
  if (!hint.empty()) msg += " (" + hint + ")";
  throw IngestError(msg);
}

unsigned default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 8u);
}

fs::path default_lexicon_dir() {
  const fs::path source = SPEECHGEN_SOURCE_LEXICON_DIR;
  if (fs::is_directory(source)) return source;
  return SPEECHGEN_INSTALLED_LEXICON_DIR;
}

Lexicon load_lexicons(const std::vector<std::string>& paths) {
  // a directory contributes its .txt files in name order; counts add up
  Lexicon merged;
  for (const auto& p : paths) {
    require_file(p, "lexicon");
    std::vector<fs::path> files;
    if (fs::is_directory(p)) {
      for (auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
    } else {
      files.emplace_back(p);
    }
    for (const auto& f : files) merged.load(f);
  }
  return merged;
}

Corpus load_corpus(const fs::path& archive) {
  require_file(archive, "corpus archive", "run `speechgen ingest` first");
  std::ifstream in(archive);
  if (!in) throw IngestError("cannot read " + archive.string());
  return read_archive(in);
}

}  // namespace speechgen::cli
