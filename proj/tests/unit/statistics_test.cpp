#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "durasim/error.hpp"
#include "durasim/statistics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace durasim;

namespace {

std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n) {
    const Distribution d = testkit::random_effort(rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(n);
    for (double& x : xs) x = sample(d, u(rng));
    // Rounded copies of earlier values exercise ties in the order statistics.
    for (std::size_t i = 1; i < n; i += 7) xs[i] = std::round(xs[i - 1]);
    return xs;
}

PhaseStats phase_with(std::string name, std::optional<double> skew, std::optional<double> kurt, double iqr = 1.0) {
    PhaseStats p;
    p.name = std::move(name);
    p.stats.count = 100;
    p.stats.sd = skew ? 1.0 : 0.0;
    p.stats.iqr = iqr;
    p.stats.skewness = skew;
    p.stats.excess_kurtosis = kurt;
    return p;
}

void expect_invariants(const SummaryStats& s) {
    EXPECT_LE(s.minimum, s.q1);
    EXPECT_LE(s.q1, s.median);
    EXPECT_LE(s.median, s.q3);
    EXPECT_LE(s.q3, s.maximum);
    EXPECT_EQ(s.iqr, s.q3 - s.q1);
    EXPECT_GE(s.iqr, 0.0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < s.histogram.size(); ++i) {
        total += s.histogram[i].count;
        if (i > 0) EXPECT_EQ(s.histogram[i].lower, s.histogram[i - 1].upper);
    }
    EXPECT_EQ(total, s.count);
    ASSERT_FALSE(s.histogram.empty());
    EXPECT_LE(s.histogram.front().lower, s.minimum);
    EXPECT_GE(s.histogram.back().upper, s.maximum);
    EXPECT_EQ(s.skewness.has_value(), s.sd > 0);
    EXPECT_EQ(s.excess_kurtosis.has_value(), s.sd > 0);
}

}  // namespace

TEST(Summarize, OneToFive) {
    const auto s = summarize(std::vector<double>{1, 2, 3, 4, 5});
    EXPECT_EQ(s.count, 5u);
    EXPECT_DOUBLE_EQ(s.mean, 3.0);
    EXPECT_NEAR(s.sd, 1.58114, 5e-6);
    EXPECT_DOUBLE_EQ(s.variance, 2.5);
    ASSERT_TRUE(s.skewness);
    EXPECT_NEAR(*s.skewness, 0.0, 1e-15);
    EXPECT_NEAR(*s.excess_kurtosis, 6.8 / 4.0 - 3.0, 1e-12);
    EXPECT_EQ(s.q1, 2.0);
    EXPECT_EQ(s.median, 3.0);
    EXPECT_EQ(s.q3, 4.0);
    EXPECT_EQ(s.iqr, 2.0);
    expect_invariants(s);
}

TEST(Summarize, ConstantStreamIsDegenerate) {
    const auto s = summarize(std::vector<double>{5, 5, 5});
    EXPECT_EQ(s.mean, 5.0);
    EXPECT_EQ(s.sd, 0.0);
    EXPECT_FALSE(s.skewness.has_value());
    EXPECT_FALSE(s.excess_kurtosis.has_value());
    EXPECT_TRUE(s.degenerate());
    expect_invariants(s);
}

TEST(Summarize, TwoPointSymmetric) {
    const auto s = summarize(std::vector<double>{-1, 1, -1, 1});
    EXPECT_DOUBLE_EQ(*s.skewness, 0.0);
    EXPECT_DOUBLE_EQ(*s.excess_kurtosis, -2.0);
}

TEST(Summarize, SingleValue) {
    const auto s = summarize(std::vector<double>{42});
    EXPECT_EQ(s.count, 1u);
    EXPECT_EQ(s.sd, 0.0);
    EXPECT_EQ(s.q1, 42.0);
    EXPECT_TRUE(s.degenerate());
}

TEST(Summarize, Errors) {
    EXPECT_THROW(summarize(std::vector<double>{}), ValidationError);
    EXPECT_THROW(summarize(std::vector<double>{1, 2}, 0), ValidationError);
}

TEST(Summarize, MatchesNaiveOracle) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> size(1, 1000);
    for (int trial = 0; trial < 100; ++trial) {
        const auto xs = random_sample(rng, size(rng));
        const auto got = summarize(xs);
        const auto ref = oracle::summarize(xs);
        EXPECT_EQ(got.count, xs.size());
        EXPECT_TRUE(oracle::close(got.mean, ref.mean, 1e-9));
        EXPECT_TRUE(oracle::close(got.variance, ref.variance, 1e-9));
        EXPECT_TRUE(oracle::close(got.sd, ref.sd, 1e-9));
        EXPECT_EQ(got.minimum, ref.minimum);
        EXPECT_EQ(got.maximum, ref.maximum);
        EXPECT_TRUE(oracle::close(got.q1, ref.q1, 1e-9));
        EXPECT_TRUE(oracle::close(got.median, ref.median, 1e-9));
        EXPECT_TRUE(oracle::close(got.q3, ref.q3, 1e-9));
        ASSERT_EQ(got.skewness.has_value(), ref.skewness.has_value());
        if (ref.skewness) {
            EXPECT_TRUE(oracle::close(*got.skewness, *ref.skewness, 1e-9)) << *got.skewness << " vs " << *ref.skewness;
            EXPECT_TRUE(oracle::close(*got.excess_kurtosis, *ref.excess_kurtosis, 1e-9));
        }
        expect_invariants(got);
    }
}

TEST(Summarize, ShiftInvariance) {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        const auto xs = random_sample(rng, 50 + trial * 10);
        const double c = std::uniform_real_distribution<double>(-500, 500)(rng);
        std::vector<double> ys(xs);
        for (double& y : ys) y += c;
        const auto a = summarize(xs);
        const auto b = summarize(ys);
        const double scale = std::max(1.0, std::abs(c) + a.maximum);
        EXPECT_NEAR(b.mean, a.mean + c, 1e-9 * scale);
        EXPECT_NEAR(b.minimum, a.minimum + c, 1e-9 * scale);
        EXPECT_NEAR(b.maximum, a.maximum + c, 1e-9 * scale);
        EXPECT_NEAR(b.q1, a.q1 + c, 1e-9 * scale);
        EXPECT_NEAR(b.median, a.median + c, 1e-9 * scale);
        EXPECT_NEAR(b.q3, a.q3 + c, 1e-9 * scale);
        EXPECT_NEAR(b.sd, a.sd, 1e-9 * scale);
        EXPECT_NEAR(b.iqr, a.iqr, 1e-9 * scale);
        EXPECT_NEAR(*b.skewness, *a.skewness, 1e-9);
        EXPECT_NEAR(*b.excess_kurtosis, *a.excess_kurtosis, 1e-9);
    }
}

TEST(Summarize, ScaleInvariance) {
    std::mt19937_64 rng(56);
    for (int trial = 0; trial < 50; ++trial) {
        const auto xs = random_sample(rng, 50 + trial * 10);
        const double k = std::uniform_real_distribution<double>(0.01, 100)(rng);
        std::vector<double> ys(xs);
        for (double& y : ys) y *= k;
        const auto a = summarize(xs);
        const auto b = summarize(ys);
        EXPECT_TRUE(oracle::close(b.mean, k * a.mean, 1e-9));
        EXPECT_TRUE(oracle::close(b.sd, k * a.sd, 1e-9));
        EXPECT_TRUE(oracle::close(b.iqr, k * a.iqr, 1e-9));
        EXPECT_NEAR(*b.skewness, *a.skewness, 1e-9);
        EXPECT_NEAR(*b.excess_kurtosis, *a.excess_kurtosis, 1e-9);
    }
}

TEST(Summarize, UniformKurtosisAndTriangularSkew) {
    std::mt19937_64 rng(57);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> flat(100'000), tail(100'000);
    for (double& x : flat) x = sample(Uniform{30, 100}, u(rng));
    for (double& x : tail) x = sample(Triangular{0, 1, 10}, u(rng));
    EXPECT_NEAR(*summarize(flat).excess_kurtosis, -1.2, 0.1);
    EXPECT_GT(*summarize(tail).skewness, 0.0);
}

TEST(Histogram, WorkedExamples) {
    const auto h = histogram(std::vector<double>{1, 2, 3, 4}, 2);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0], (HistogramBin{1, 2.5, 2}));
    EXPECT_EQ(h[1], (HistogramBin{2.5, 4, 2}));

    const auto single = histogram(std::vector<double>{7});
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0], (HistogramBin{6.5, 7.5, 1}));
}

TEST(Histogram, UniformBinsAreBalanced) {
    std::mt19937_64 rng(58);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(10'000);
    for (double& x : xs) x = u(rng);
    const auto h = histogram(xs, 10);
    ASSERT_EQ(h.size(), 10u);
    for (const auto& b : h) EXPECT_NEAR(static_cast<double>(b.count), 1000.0, 150.0);
}

TEST(Histogram, AutoBinCount) {
    EXPECT_EQ(auto_bin_count(1), 10u);
    EXPECT_EQ(auto_bin_count(99), 10u);
    EXPECT_EQ(auto_bin_count(101), 11u);
    EXPECT_EQ(auto_bin_count(10'000), 100u);
    EXPECT_EQ(auto_bin_count(1'000'000), 100u);
    EXPECT_EQ(histogram(std::vector<double>(400, 1.0)).size(), 1u);
}

TEST(Histogram, EveryValueLandsInItsBin) {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        const auto xs = random_sample(rng, 10 + trial * 37);
        const auto h = histogram(xs, 1 + trial % 17);
        std::vector<std::size_t> counts(h.size(), 0);
        for (double x : xs) {
            // A value sits in the bin whose half-open interval holds it; the
            // maximum belongs to the last bin.
            std::size_t k = h.size() - 1;
            for (std::size_t i = 0; i + 1 < h.size(); ++i) {
                if (x < h[i].upper) {
                    k = i;
                    break;
                }
            }
            ++counts[k];
        }
        for (std::size_t i = 0; i < h.size(); ++i) EXPECT_EQ(h[i].count, counts[i]);
    }
}

TEST(SortedQuantile, Type7) {
    const std::vector<double> xs{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(sorted_quantile(xs, 0.25), 1.75);
    EXPECT_DOUBLE_EQ(sorted_quantile(xs, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(sorted_quantile(xs, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(sorted_quantile(xs, 0.0), 1.0);
}

TEST(RankRisks, SpreadAscendsByKurtosis) {
    const auto r = rank_risks({phase_with("A", 0.0, -1.2), phase_with("B", 0.0, 0.1), phase_with("C", 0.0, 0.5)});
    EXPECT_EQ(r.spread_ranking, (std::vector<std::string>{"A", "B", "C"}));
}

TEST(RankRisks, OverrunDescendsBySkewness) {
    const auto r = rank_risks({phase_with("A", 0.8, 0.0), phase_with("B", -0.3, 0.0), phase_with("C", 0.0, 0.0)});
    EXPECT_EQ(r.overrun_ranking, (std::vector<std::string>{"A", "C", "B"}));
}

TEST(RankRisks, AllDegenerateFallsBackToPhaseOrder) {
    const auto r = rank_risks({phase_with("X", std::nullopt, std::nullopt, 0), phase_with("Y", std::nullopt, std::nullopt, 0)});
    EXPECT_EQ(r.spread_ranking, (std::vector<std::string>{"X", "Y"}));
    EXPECT_EQ(r.overrun_ranking, (std::vector<std::string>{"X", "Y"}));
    EXPECT_EQ(r.degenerate, (std::vector<std::string>{"X", "Y"}));
}

TEST(RankRisks, DegenerateRankLastAndTiesPreferLargerIqr) {
    const auto r = rank_risks({phase_with("D", std::nullopt, std::nullopt, 0), phase_with("A", 0.1, 0.2, 3.0),
                               phase_with("B", 0.1, 0.2, 5.0), phase_with("C", 0.1, 0.2, 5.0)});
    EXPECT_EQ(r.spread_ranking, (std::vector<std::string>{"B", "C", "A", "D"}));
    EXPECT_EQ(r.overrun_ranking, (std::vector<std::string>{"B", "C", "A", "D"}));
    EXPECT_EQ(r.degenerate, (std::vector<std::string>{"D"}));
}

TEST(RankRisks, RankingsAreInvariantUnderCommonAffineTransforms) {
    std::mt19937_64 rng(60);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> samples;
        for (int p = 0; p < 4; ++p) samples.push_back(random_sample(rng, 500));
        const double c = std::uniform_real_distribution<double>(-100, 100)(rng);
        const double k = std::uniform_real_distribution<double>(0.1, 10)(rng);
        std::vector<PhaseStats> base, moved;
        for (int p = 0; p < 4; ++p) {
            std::vector<double> ys(samples[p]);
            for (double& y : ys) y = k * y + c;
            base.push_back({"P" + std::to_string(p), summarize(samples[p])});
            moved.push_back({"P" + std::to_string(p), summarize(ys)});
        }
        const auto a = rank_risks(base);
        const auto b = rank_risks(moved);
        EXPECT_EQ(a.spread_ranking, b.spread_ranking);
        EXPECT_EQ(a.overrun_ranking, b.overrun_ranking);
    }
}

TEST(RankRisks, RankingsArePermutations) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PhaseStats> phases;
        const int n = 1 + trial % 6;
        for (int p = 0; p < n; ++p) {
            auto xs = random_sample(rng, 30);
            if (p % 3 == 2) std::fill(xs.begin(), xs.end(), 4.0);
            phases.push_back({"P" + std::to_string(p), summarize(xs)});
        }
        const auto r = rank_risks(phases);
        auto names = [&] {
            std::vector<std::string> v;
            for (const auto& p : phases) v.push_back(p.name);
            std::sort(v.begin(), v.end());
            return v;
        }();
        auto s = r.spread_ranking;
        auto o = r.overrun_ranking;
        std::sort(s.begin(), s.end());
        std::sort(o.begin(), o.end());
        EXPECT_EQ(s, names);
        EXPECT_EQ(o, names);
    }
}

TEST(Streaming, AssembleSummaryMatchesSummarize) {
    std::mt19937_64 rng(62);
    const auto xs = random_sample(rng, 777);
    const auto direct = summarize(xs);
    CentralSums sums;
    sums.count = xs.size();
    sums.mean = direct.mean;
    for (double x : xs) sums.add(x);
    const HistogramLayout layout(direct.minimum, direct.maximum, auto_bin_count(xs.size()));
    std::vector<std::size_t> counts(layout.size(), 0);
    for (double x : xs) ++counts[layout.index_of(x)];
    const auto assembled = assemble_summary(sums, direct.minimum, direct.maximum,
                                            Quartiles{direct.q1, direct.median, direct.q3}, layout.with_counts(counts));
    EXPECT_EQ(assembled, direct);
}
