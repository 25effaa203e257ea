#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace speechgen {

// Seeded random source. Sampling is implemented on top of the raw engine
// output so that draws are reproducible across standard library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  // Index drawn proportionally to non-negative weights. Falls back to a
  // uniform draw when all weights are zero.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace speechgen
