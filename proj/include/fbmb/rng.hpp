#pragma once

#include <cstdint>
#include <random>

namespace fbmb {

/// Purpose tags mixed into substream identifiers so that world layout,
/// brain noise, selection and mutation never share a stream.
enum class StreamPurpose : std::uint64_t {
  World = 1,
  Brain = 2,
  Selection = 3,
  Mutation = 4,
  Founder = 5,
  Lineage = 6,
  AnalysisWorld = 7,
  AnalysisBrain = 8,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the substream (master, generation, individual, mapping, purpose).
/// Each component is folded in with one SplitMix64 round, so the result is a
/// pure function of its arguments on every platform.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t generation,
                                       std::uint64_t individual, std::uint64_t mapping,
                                       StreamPurpose purpose) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ generation);
  h = mix64(h ^ individual);
  h = mix64(h ^ mapping);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

/// Random stream backed by mt19937_64. The engine output is fixed by the
/// standard; the conversions below are written out by hand because the
/// std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master, std::uint64_t generation, std::uint64_t individual,
                       std::uint64_t mapping, StreamPurpose purpose) {
    return Rng(substream_seed(master, generation, individual, mapping, purpose));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection; unbiased.
    std::uint64_t x = engine_();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = engine_();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint8_t byte() { return static_cast<std::uint8_t>(engine_() >> 56); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fbmb
