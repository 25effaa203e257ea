#include "speechgen/langmodel.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "speechgen/error.hpp"

namespace speechgen {

using nlohmann::json;

namespace {

constexpr std::string_view kFormatName = "speechgen-ngram";

}  // namespace

double NextWordDistribution::probability(std::string_view token) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), token,
                             [](const Entry& e, std::string_view t) { return e.token < t; });
  return (it != entries.end() && it->token == token) ? it->probability : 0.0;
}

NGramModel NGramModel::train(const Corpus& corpus, SpeechClass cls) {
  std::vector<const TokenizedSpeech*> members;
  for (std::size_t i : corpus.class_members(cls)) members.push_back(&corpus.speeches()[i]);
  return train(cls, members);
}

NGramModel NGramModel::train(SpeechClass cls, std::span<const TokenizedSpeech* const> speeches) {
  if (speeches.empty()) throw TrainingError("no training speeches for class " + cls.code());

  NGramModel m;
  m.cls_ = cls;
  m.speech_count_ = speeches.size();

  std::set<std::string> vocab;
  for (const auto* s : speeches) vocab.insert(s->tokens.begin(), s->tokens.end());
  m.vocabulary_.assign(vocab.begin(), vocab.end());
  for (TokenId i = 0; i < m.vocabulary_.size(); ++i) m.ids_.emplace(m.vocabulary_[i], i);

  std::map<ContextIds, std::uint64_t> openers;
  std::vector<TokenId> stream;
  for (const auto* s : speeches) {
    stream.clear();
    for (const auto& t : s->tokens) stream.push_back(m.ids_.at(t));
    if (stream.size() < kContextLength) {
      throw TrainingError("speech '" + s->id + "' is shorter than one context");
    }
    ContextIds opener;
    std::copy_n(stream.begin(), kContextLength, opener.begin());
    openers[opener] += 1;
    for (std::size_t i = 0; i + kOrder <= stream.size(); ++i) {
      ContextIds ctx;
      std::copy_n(stream.begin() + static_cast<std::ptrdiff_t>(i), kContextLength, ctx.begin());
      auto& entry = m.contexts_[ctx];
      entry.total += 1;
      const TokenId next = stream[i + kContextLength];
      auto it = std::lower_bound(entry.successors.begin(), entry.successors.end(), next,
                                 [](const Successor& a, TokenId b) { return a.token < b; });
      if (it != entry.successors.end() && it->token == next) it->count += 1;
      else entry.successors.insert(it, Successor{next, 1});
    }
  }
  m.openers_.assign(openers.begin(), openers.end());
  return m;
}

std::optional<TokenId> NGramModel::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<ContextIds> NGramModel::to_ids(std::span<const std::string> context) const {
  if (context.size() != kContextLength) return std::nullopt;
  ContextIds ids;
  for (std::size_t i = 0; i < kContextLength; ++i) {
    auto id = id_of(context[i]);
    if (!id) return std::nullopt;
    ids[i] = *id;
  }
  return ids;
}

const NGramModel::ContextEntry* NGramModel::find(const ContextIds& ids) const {
  auto it = contexts_.find(ids);
  return it == contexts_.end() ? nullptr : &it->second;
}

std::optional<NextWordDistribution> NGramModel::next_distribution(std::span<const std::string> context) const {
  const auto ids = to_ids(context);
  if (!ids) return std::nullopt;
  const auto* entry = find(*ids);
  if (!entry) return std::nullopt;
  NextWordDistribution d;
  d.context_count = entry->total;
  d.entries.reserve(entry->successors.size());
  for (const auto& s : entry->successors) {
    d.entries.push_back({vocabulary_[s.token], s.count,
                         static_cast<double>(s.count) / static_cast<double>(entry->total)});
  }
  return d;
}

Context NGramModel::sample_opener(Rng& rng) const {
  std::vector<double> weights;
  weights.reserve(openers_.size());
  for (const auto& [ids, count] : openers_) weights.push_back(static_cast<double>(count));
  const auto& chosen = openers_[rng.categorical(weights)].first;
  Context out;
  for (std::size_t i = 0; i < kContextLength; ++i) out[i] = vocabulary_[chosen[i]];
  return out;
}

std::vector<std::pair<Context, double>> NGramModel::openers() const {
  std::vector<std::pair<Context, double>> out;
  for (const auto& [ids, count] : openers_) {
    Context c;
    for (std::size_t i = 0; i < kContextLength; ++i) c[i] = vocabulary_[ids[i]];
    out.emplace_back(std::move(c), static_cast<double>(count) / static_cast<double>(speech_count_));
  }
  return out;
}

std::uint64_t NGramModel::window_count() const {
  std::uint64_t n = 0;
  for (const auto& [ctx, entry] : contexts_) n += entry.total;
  return n;
}

void NGramModel::save(std::ostream& out) const {
  std::vector<const std::pair<const ContextIds, ContextEntry>*> sorted;
  sorted.reserve(contexts_.size());
  for (const auto& kv : contexts_) sorted.push_back(&kv);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->first < b->first; });

  json header;
  header["format"] = kFormatName;
  header["version"] = kModelFormatVersion;
  header["class"] = cls_.code();
  header["order"] = kOrder;
  header["speeches"] = speech_count_;
  header["contexts"] = sorted.size();
  header["openers"] = openers_.size();
  header["vocabulary"] = vocabulary_;
  out << header.dump() << '\n';

  for (const auto* kv : sorted) {
    json rec;
    rec["context"] = kv->first;
    json succ = json::array();
    for (const auto& s : kv->second.successors) succ.push_back({s.token, s.count});
    rec["successors"] = std::move(succ);
    out << rec.dump() << '\n';
  }
  for (const auto& [ids, count] : openers_) {
    json rec;
    rec["opener"] = ids;
    rec["count"] = count;
    out << rec.dump() << '\n';
  }
}

NGramModel NGramModel::load(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_record = [&](const char* what) {
    if (!std::getline(in, line)) {
      throw FormatError("model file truncated: missing " + std::string(what) + " after line " +
                        std::to_string(line_no));
    }
    ++line_no;
    try {
      return json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError("model file line " + std::to_string(line_no) + ": " + e.what());
    }
  };

  NGramModel m;
  try {
    const json header = next_record("header");
    if (header.value("format", "") != kFormatName) throw FormatError("not a speechgen n-gram model file");
    if (header.at("version").get<int>() != kModelFormatVersion) {
      throw FormatError("unsupported model format version " + header.at("version").dump());
    }
    if (header.at("order").get<std::size_t>() != kOrder) {
      throw FormatError("model order " + header.at("order").dump() + " is not supported (expected 6)");
    }
    const auto cls = SpeechClass::parse(header.at("class").get<std::string>());
    if (!cls) throw FormatError("unknown class in model header");
    m.cls_ = *cls;
    m.speech_count_ = header.at("speeches").get<std::uint64_t>();
    m.vocabulary_ = header.at("vocabulary").get<std::vector<std::string>>();
    for (TokenId i = 0; i < m.vocabulary_.size(); ++i) m.ids_.emplace(m.vocabulary_[i], i);
    const auto n_contexts = header.at("contexts").get<std::size_t>();
    const auto n_openers = header.at("openers").get<std::size_t>();
    const auto vocab_size = m.vocabulary_.size();
    auto check_ids = [&](const ContextIds& ids) {
      for (TokenId id : ids) {
        if (id >= vocab_size) throw FormatError("token id out of range at line " + std::to_string(line_no));
      }
    };

    for (std::size_t i = 0; i < n_contexts; ++i) {
      const json rec = next_record("context record");
      const auto ids = rec.at("context").get<ContextIds>();
      check_ids(ids);
      ContextEntry entry;
      for (const auto& s : rec.at("successors")) {
        const auto tok = s.at(0).get<TokenId>();
        const auto count = s.at(1).get<std::uint64_t>();
        if (tok >= vocab_size || count == 0) throw FormatError("bad successor at line " + std::to_string(line_no));
        entry.successors.push_back({tok, count});
        entry.total += count;
      }
      if (entry.successors.empty()) throw FormatError("context without successors at line " + std::to_string(line_no));
      std::sort(entry.successors.begin(), entry.successors.end(),
                [](const Successor& a, const Successor& b) { return a.token < b.token; });
      m.contexts_.emplace(ids, std::move(entry));
    }
    std::uint64_t opener_total = 0;
    for (std::size_t i = 0; i < n_openers; ++i) {
      const json rec = next_record("opener record");
      const auto ids = rec.at("opener").get<ContextIds>();
      check_ids(ids);
      const auto count = rec.at("count").get<std::uint64_t>();
      opener_total += count;
      m.openers_.emplace_back(ids, count);
    }
    if (opener_total != m.speech_count_) throw FormatError("opener counts do not add up to the speech count");
    std::sort(m.openers_.begin(), m.openers_.end());
  } catch (const json::exception& e) {
    throw FormatError("model file line " + std::to_string(line_no) + ": " + e.what());
  }
  if (m.openers_.empty()) throw FormatError("model has no openers");
  return m;
}

}  // namespace speechgen
