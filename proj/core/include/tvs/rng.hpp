#pragma once

#include <cstdint>
#include <random>

namespace tvs {

/// Deterministic PRNG stream. Streams for separate stages are derived from a
/// root seed plus a stage tag and index, so reruns reproduce every choice.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng derive(std::uint64_t root, std::uint64_t tag, std::uint64_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 engine(seq);
    return Rng(engine());
  }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). Rejection sampling keeps the stream identical on every
  // standard library (std::uniform_int_distribution is implementation-defined).
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
};

// Stage tags for derived streams.
inline constexpr std::uint64_t kTagRegularizeRow = 0x726f77;
inline constexpr std::uint64_t kTagRegularizeCol = 0x636f6c;
inline constexpr std::uint64_t kTagDependentChoice = 0x647263;
inline constexpr std::uint64_t kTagAnchor = 0x616e63;
inline constexpr std::uint64_t kTagCertify = 0x636572;
inline constexpr std::uint64_t kTagGenerate = 0x67656e;

}  // namespace tvs
