#include <algorithm>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

#include "speechgen/corpus.hpp"
#include "speechgen/error.hpp"

namespace speechgen {

namespace fs = std::filesystem;

namespace {

// std::regex has no named groups; rewrite them as plain captures and
// remember the resulting group numbers.
struct CompiledFilenameRule {
  std::regex re;
  std::size_t party_group = 0;
  std::size_t vote_group = 0;
};

CompiledFilenameRule compile(const FilenameRule& rule) {
  const std::string& p = rule.pattern;
  std::string translated;
  translated.reserve(p.size());
  std::size_t group = 0;
  CompiledFilenameRule out;
  bool in_class = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const char c = p[i];
    if (c == '\\' && i + 1 < p.size()) {
      translated += c;
      translated += p[++i];
      continue;
    }
    if (in_class) {
      if (c == ']') in_class = false;
      translated += c;
      continue;
    }
    if (c == '[') {
      in_class = true;
      translated += c;
      continue;
    }
    if (c != '(') {
      translated += c;
      continue;
    }
    if (i + 1 < p.size() && p[i + 1] == '?') {
      std::size_t name_start = std::string::npos;
      if (p.compare(i + 2, 2, "P<") == 0) {
        name_start = i + 4;
      } else if (i + 3 < p.size() && p[i + 2] == '<' && p[i + 3] != '=' && p[i + 3] != '!') {
        name_start = i + 3;
      }
      if (name_start == std::string::npos) {
        translated += c;  // non-capturing group or assertion
        continue;
      }
      const auto close = p.find('>', name_start);
      if (close == std::string::npos) throw ValidationError("unterminated group name in labeling regex");
      const std::string name = p.substr(name_start, close - name_start);
      ++group;
      if (name == "party") out.party_group = group;
      else if (name == "vote") out.vote_group = group;
      translated += '(';
      i = close;
      continue;
    }
    ++group;
    translated += c;
  }
  if (out.party_group == 0 || out.vote_group == 0) {
    throw ValidationError("labeling regex needs named groups 'party' and 'vote': " + p);
  }
  try {
    out.re = std::regex(translated, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ValidationError("invalid labeling regex '" + p + "': " + e.what());
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read speech file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IngestError("error while reading speech file: " + path.string());
  return text;
}

std::string id_for(const fs::path& relative) {
  fs::path p = relative;
  p.replace_extension();
  return p.generic_string();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

IngestResult ingest_directory(const fs::path& root, const FilenameRule& rule) {
  if (!fs::exists(root)) throw IngestError("source does not exist: " + root.string());
  const auto compiled = compile(rule);
  std::vector<fs::path> files;
  if (fs::is_directory(root)) {
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
  } else {
    files.push_back(root);
  }

  IngestResult result;
  for (const auto& file : files) {
    const auto relative = fs::is_directory(root) ? fs::relative(file, root) : file.filename();
    const std::string name = file.filename().string();
    std::smatch m;
    std::optional<Party> party;
    std::optional<Vote> vote;
    if (std::regex_search(name, m, compiled.re)) {
      party = parse_party(m[compiled.party_group].str());
      vote = parse_vote(m[compiled.vote_group].str());
    }
    if (!party || !vote) {
      result.skipped.push_back(relative.generic_string());
      continue;
    }
    result.speeches.push_back({id_for(relative), SpeechClass{*party, *vote}, read_file(file)});
  }
  return result;
}

IngestResult ingest_manifest(const ManifestRule& rule) {
  std::ifstream in(rule.manifest);
  if (!in) throw IngestError("cannot read manifest: " + rule.manifest.string());
  const fs::path base = rule.manifest.parent_path();
  std::string line;
  if (!std::getline(in, line)) throw IngestError("manifest is empty: " + rule.manifest.string());
  auto header = split_csv_line(line);
  for (auto& h : header) std::transform(h.begin(), h.end(), h.begin(), ::tolower);
  if (header != std::vector<std::string>{"path", "party", "vote"}) {
    throw IngestError("manifest header must be 'path,party,vote': " + rule.manifest.string());
  }
  IngestResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      throw IngestError(rule.manifest.string() + ":" + std::to_string(line_no) +
                        ": expected 3 fields");
    }
    const fs::path rel = fields[0];
    const fs::path full = rel.is_absolute() ? rel : base / rel;
    if (!fs::is_regular_file(full)) throw IngestError("manifest lists missing file: " + full.string());
    const auto party = parse_party(fields[1]);
    const auto vote = parse_vote(fields[2]);
    if (!party || !vote) {
      result.skipped.push_back(rel.generic_string());
      continue;
    }
    result.speeches.push_back({id_for(rel), SpeechClass{*party, *vote}, read_file(full)});
  }
  return result;
}

}  // namespace

FilenameRule convote_filename_rule() {
  return {R"(^\d+_\d+_\d+_(?P<party>[A-Za-z])[A-Za-z](?P<vote>[A-Za-z])\.txt$)"};
}

IngestResult ingest(const fs::path& source, const LabelingRule& rule) {
  IngestResult result = std::visit(
      [&](const auto& r) -> IngestResult {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FilenameRule>) return ingest_directory(source, r);
        else return ingest_manifest(r);
      },
      rule);
  std::sort(result.speeches.begin(), result.speeches.end(),
            [](const RawSpeech& a, const RawSpeech& b) { return a.id < b.id; });
  std::sort(result.skipped.begin(), result.skipped.end());
  return result;
}

}  // namespace speechgen
