#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace speechgen {

enum class Party : std::uint8_t { Democrat, Republican };
enum class Vote : std::uint8_t { Yea, Nay };

// One of the four party x vote classes. The canonical two-letter code is
// party initial followed by vote initial, e.g. "RY" or "DN".
struct SpeechClass {
  Party party = Party::Republican;
  Vote vote = Vote::Yea;

  std::string code() const;

  // Position in table order RY, RN, DY, DN.
  std::size_t index() const;

  static std::optional<SpeechClass> parse(std::string_view code);
  static SpeechClass from_index(std::size_t index);

  friend bool operator==(const SpeechClass&, const SpeechClass&) = default;
};

inline constexpr std::size_t kClassCount = 4;

inline constexpr std::array<SpeechClass, kClassCount> kAllClasses{{
    {Party::Republican, Vote::Yea},
    {Party::Republican, Vote::Nay},
    {Party::Democrat, Vote::Yea},
    {Party::Democrat, Vote::Nay},
}};

// Accepts single letters (D/R, Y/N) or full words, case-insensitive.
std::optional<Party> parse_party(std::string_view text);
std::optional<Vote> parse_vote(std::string_view text);

}  // namespace speechgen
