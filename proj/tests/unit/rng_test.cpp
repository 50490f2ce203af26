#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "durasim/rng.hpp"

using namespace durasim;

// Known-answer vectors published with the Random123 distribution (kat_vectors, philox4x32_10).
TEST(Philox, KnownAnswerVectors) {
    struct Kat {
        Philox4x32::Counter counter;
        Philox4x32::Key key;
        Philox4x32::Counter expected;
    };
    const Kat kats[] = {
        {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
        {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
         {0xffffffff, 0xffffffff},
         {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
        {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
         {0xa4093822, 0x299f31d0},
         {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
    };
    for (const Kat& k : kats) EXPECT_EQ(Philox4x32::generate(k.counter, k.key), k.expected);
}

TEST(Substream, IsAPureFunctionOfItsCell) {
    EXPECT_EQ(substream_uniform(42, 1000, 3), substream_uniform(42, 1000, 3));
    EXPECT_NE(substream_uniform(42, 1000, 3), substream_uniform(42, 1000, 4));
    EXPECT_NE(substream_uniform(42, 1000, 3), substream_uniform(42, 1001, 3));
    EXPECT_NE(substream_uniform(42, 1000, 3), substream_uniform(43, 1000, 3));
}

TEST(Substream, StaysInsideOpenUnitInterval) {
    for (std::uint64_t seed : {0ull, 1ull, ~0ull}) {
        for (std::uint64_t i = 0; i < 20'000; ++i) {
            const double u = substream_uniform(seed, i, i % 7);
            ASSERT_GT(u, 0.0);
            ASSERT_LT(u, 1.0);
        }
    }
}

TEST(Substream, MomentsOfUniform) {
    const int n = 200'000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = substream_uniform(99, static_cast<std::uint64_t>(i), 0);
        sum += u;
        sq += u * u;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sq / n - mean * mean, 1.0 / 12.0, 0.002);
}

TEST(Substream, AdjacentStreamsAreUncorrelated) {
    const int n = 100'000;
    double sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = substream_uniform(5, static_cast<std::uint64_t>(i), 0) - 0.5;
        const double y = substream_uniform(5, static_cast<std::uint64_t>(i), 1) - 0.5;
        sxy += x * y;
    }
    const double corr = (sxy / n) / (1.0 / 12.0);
    EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(n));
}

TEST(CounterEngine, ReplaysAndSeparatesStreams) {
    CounterEngine a(7, 0), b(7, 0), c(7, 1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
        seen.insert(x);
    }
    EXPECT_EQ(seen.size(), 1000u);
}
