#include <gtest/gtest.h>

#include <array>
#include <set>

#include "fbmb/rng.hpp"

using namespace fbmb;

TEST(Rng, SubstreamSeedIsPureAndSeparatesEveryComponent) {
  const std::uint64_t base = substream_seed(7, 3, 5, 11, StreamPurpose::World);
  EXPECT_EQ(base, substream_seed(7, 3, 5, 11, StreamPurpose::World));
  std::set<std::uint64_t> seen{base};
  seen.insert(substream_seed(8, 3, 5, 11, StreamPurpose::World));
  seen.insert(substream_seed(7, 4, 5, 11, StreamPurpose::World));
  seen.insert(substream_seed(7, 3, 6, 11, StreamPurpose::World));
  seen.insert(substream_seed(7, 3, 5, 12, StreamPurpose::World));
  seen.insert(substream_seed(7, 3, 5, 11, StreamPurpose::Brain));
  // swapped components must not collide either
  seen.insert(substream_seed(7, 5, 3, 11, StreamPurpose::World));
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, KnownSubstreamValueIsStable) {
  // mix64 of 0 is the first SplitMix64 output for state 0.
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  Rng a = Rng::substream(1, 0, 0, 0, StreamPurpose::World);
  Rng b(substream_seed(1, 0, 0, 0, StreamPurpose::World));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, Uniform01StaysInHalfOpenUnitInterval) {
  Rng rng(3);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(Rng, BelowIsUniformByChiSquare) {
  Rng rng(99);
  constexpr int kBins = 7;
  constexpr int kDraws = 70000;
  std::array<int, kBins> counts{};
  for (int i = 0; i < kDraws; ++i) ++counts[rng.below(kBins)];
  double chi2 = 0.0;
  const double expected = static_cast<double>(kDraws) / kBins;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 6 degrees of freedom, p = 0.001 critical value
  EXPECT_LT(chi2, 22.46);
}

TEST(Rng, RangeIsInclusive) {
  Rng rng(5);
  bool low = false, high = false;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.range(-2, 2);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 2);
    low = low || v == -2;
    high = high || v == 2;
  }
  EXPECT_TRUE(low);
  EXPECT_TRUE(high);
}

TEST(Rng, BernoulliEdges) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
  }
}
