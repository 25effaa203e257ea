#include "speechgen/speech_class.hpp"

#include <algorithm>
#include <cctype>

#include "speechgen/error.hpp"
#include "speechgen/random.hpp"

namespace speechgen {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string SpeechClass::code() const {
  std::string out(2, ' ');
  out[0] = party == Party::Democrat ? 'D' : 'R';
  out[1] = vote == Vote::Yea ? 'Y' : 'N';
  return out;
}

std::size_t SpeechClass::index() const {
  return (party == Party::Republican ? 0 : 2) + (vote == Vote::Yea ? 0 : 1);
}

SpeechClass SpeechClass::from_index(std::size_t index) {
  if (index >= kClassCount) throw ValidationError("speech class index out of range");
  return kAllClasses[index];
}

std::optional<SpeechClass> SpeechClass::parse(std::string_view code) {
  if (code.size() != 2) return std::nullopt;
  auto party = parse_party(code.substr(0, 1));
  auto vote = parse_vote(code.substr(1, 1));
  if (!party || !vote) return std::nullopt;
  return SpeechClass{*party, *vote};
}

std::optional<Party> parse_party(std::string_view text) {
  const auto t = lower(text);
  if (t == "d" || t == "dem" || t == "democrat" || t == "democratic") return Party::Democrat;
  if (t == "r" || t == "rep" || t == "republican") return Party::Republican;
  return std::nullopt;
}

std::optional<Vote> parse_vote(std::string_view text) {
  const auto t = lower(text);
  if (t == "y" || t == "yea" || t == "yes") return Vote::Yea;
  if (t == "n" || t == "nay" || t == "no") return Vote::Nay;
  return std::nullopt;
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw ValidationError("Rng::below requires a positive bound");
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

std::size_t Rng::categorical(std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("cannot sample from an empty distribution");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return below(weights.size());
  const double target = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace speechgen
