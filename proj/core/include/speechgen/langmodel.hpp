#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "speechgen/corpus.hpp"
#include "speechgen/random.hpp"
#include "speechgen/speech_class.hpp"

namespace speechgen {

inline constexpr std::size_t kOrder = 6;
inline constexpr std::size_t kContextLength = kOrder - 1;
inline constexpr int kModelFormatVersion = 1;

using Context = std::array<std::string, kContextLength>;
using TokenId = std::uint32_t;
using ContextIds = std::array<TokenId, kContextLength>;

struct ContextIdsHash {
  std::size_t operator()(const ContextIds& ids) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (TokenId id : ids) {
      h ^= id;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

// Successors of one context, ordered by token.
struct NextWordDistribution {
  struct Entry {
    std::string token;
    std::uint64_t count = 0;
    double probability = 0.0;
  };
  std::vector<Entry> entries;
  std::uint64_t context_count = 0;

  std::size_t support() const { return entries.size(); }
  // 0 when the token is not a successor.
  double probability(std::string_view token) const;
};

// Unsmoothed order-6 model of one speech class. Counts are stored as
// integers; probabilities are count / context count.
class NGramModel {
 public:
  struct Successor {
    TokenId token;
    std::uint64_t count;
  };
  struct ContextEntry {
    std::uint64_t total = 0;
    std::vector<Successor> successors;  // sorted by token id
  };

  // Counts every 6-token window of each speech's full token stream. Throws
  // TrainingError when `speeches` is empty.
  static NGramModel train(SpeechClass cls, std::span<const TokenizedSpeech* const> speeches);
  static NGramModel train(const Corpus& corpus, SpeechClass cls);

  SpeechClass speech_class() const { return cls_; }

  std::optional<NextWordDistribution> next_distribution(std::span<const std::string> context) const;
  Context sample_opener(Rng& rng) const;

  // Openers with their probability, ordered by token sequence.
  std::vector<std::pair<Context, double>> openers() const;
  std::uint64_t speech_count() const { return speech_count_; }

  std::size_t context_count() const { return contexts_.size(); }
  std::uint64_t window_count() const;

  // Id-level access for hot loops. Ids follow lexicographic token order.
  std::optional<TokenId> id_of(std::string_view token) const;
  const std::string& token(TokenId id) const { return vocabulary_[id]; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  const ContextEntry* find(const ContextIds& ids) const;
  std::optional<ContextIds> to_ids(std::span<const std::string> context) const;

  // JSON lines: a header record, then context records, then opener records.
  void save(std::ostream& out) const;
  static NGramModel load(std::istream& in);

 private:
  SpeechClass cls_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, TokenId> ids_;
  std::unordered_map<ContextIds, ContextEntry, ContextIdsHash> contexts_;
  std::vector<std::pair<ContextIds, std::uint64_t>> openers_;  // sorted by ids
  std::uint64_t speech_count_ = 0;
};

}  // namespace speechgen
