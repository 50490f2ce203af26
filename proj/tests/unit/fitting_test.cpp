#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "durasim/error.hpp"
#include "durasim/fitting.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace durasim;

namespace {

std::vector<double> draws(const Distribution& d, int n, std::uint64_t seed) {
    return testkit::seeded_draws(d, static_cast<std::size_t>(n), seed);
}

const std::vector<Family> kFive{Family::normal, Family::uniform, Family::triangular, Family::logistic, Family::point};

}  // namespace

TEST(FitFamily, WorkedExamples) {
    const std::vector<double> data{10, 20, 30};
    EXPECT_EQ(std::get<Normal>(fit_family(data, Family::normal)), (Normal{20, 10}));
    const auto u = std::get<Uniform>(fit_family(data, Family::uniform));
    EXPECT_NEAR(u.min, 20 - std::sqrt(3.0) * 10, 1e-12);
    EXPECT_NEAR(u.max, 20 + std::sqrt(3.0) * 10, 1e-12);
    EXPECT_NEAR(u.min, 2.6795, 5e-5);
    EXPECT_NEAR(u.max, 37.3205, 5e-5);
    const auto l = std::get<Logistic>(fit_family(data, Family::logistic));
    EXPECT_EQ(l.location, 20);
    EXPECT_NEAR(l.scale, 5.5133, 5e-5);
    const auto t = std::get<Triangular>(fit_family(data, Family::triangular));
    EXPECT_NEAR(t.min, 20 - std::sqrt(6.0) * 10, 1e-12);
    EXPECT_EQ(t.mode, 20);
    EXPECT_NEAR(t.max, 20 + std::sqrt(6.0) * 10, 1e-12);
    EXPECT_EQ(std::get<PointValue>(fit_family(data, Family::point)), PointValue{20});
}

TEST(FitFamily, MomentsOfFitEqualSampleMoments) {
    const std::vector<double> data{3, 9, 4, 11, 7, 15};
    const auto s = oracle::summarize(data);
    for (Family f : {Family::normal, Family::uniform, Family::triangular, Family::logistic}) {
        const Distribution d = fit_family(data, f);
        EXPECT_NEAR(mean(d), s.mean, 1e-12) << family_name(f);
        EXPECT_NEAR(variance(d), s.variance, 1e-9) << family_name(f);
    }
}

TEST(FitFamily, Errors) {
    EXPECT_THROW(fit_family(std::vector<double>{1, 2}, Family::normal), InsufficientDataError);
    EXPECT_THROW(fit_family(std::vector<double>{4, 4, 4}, Family::normal), ValidationError);
    EXPECT_EQ(std::get<PointValue>(fit_family(std::vector<double>{4, 4, 4}, Family::point)), PointValue{4});
}

TEST(FitFamily, NormalRoundTripRecoversParameters) {
    const double mu = 120, sigma = 15;
    const auto data = draws(Normal{mu, sigma}, 1000, 31337);
    const auto n = std::get<Normal>(fit_family(data, Family::normal));
    EXPECT_NEAR(n.mean, mu, 4 * sigma / std::sqrt(1000.0));
    EXPECT_NEAR(n.sd / sigma, 1.0, 0.10);
}

TEST(KsStatistic, WorkedExamples) {
    EXPECT_DOUBLE_EQ(ks_statistic(std::vector<double>{0.5}, Uniform{0, 1}), 0.5);
    EXPECT_DOUBLE_EQ(ks_statistic(std::vector<double>{0.25, 0.75}, Uniform{0, 1}), 0.25);
}

TEST(KsStatistic, SmallForDataDrawnFromTheDistribution) {
    for (const Distribution d : {Distribution{Normal{50, 5}}, Distribution{Triangular{0, 1, 10}},
                                 Distribution{Uniform{30, 100}}, Distribution{Logistic{3, 2}}}) {
        EXPECT_LT(ks_statistic(draws(d, 10'000, 404), d), 0.02) << describe(d);
    }
}

TEST(KsStatistic, PointValueMatchedExactlyScoresZero) {
    EXPECT_EQ(ks_statistic(std::vector<double>{10, 10, 10}, PointValue{10}), 0.0);
    EXPECT_EQ(ks_statistic(std::vector<double>{10, 10, 10}, PointValue{11}), 1.0);
}

TEST(KsStatistic, EmptyDataIsAnError) {
    EXPECT_THROW(ks_statistic(std::vector<double>{}, Normal{0, 1}), InsufficientDataError);
}

TEST(KsStatistic, InvariantToDataOrder) {
    std::vector<double> data{5, 1, 4, 1, 3};
    const double a = ks_statistic(data, Normal{3, 1.5});
    std::reverse(data.begin(), data.end());
    EXPECT_EQ(ks_statistic(data, Normal{3, 1.5}), a);
}

TEST(KsStatistic, MatchesBruteForceOracleOnSmallDatasets) {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> size(1, 6);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int trial = 0; trial < 5000; ++trial) {
        const Distribution d = testkit::random_distribution(rng);
        const double c = mean(d);
        const double s = std::max(1.0, std::sqrt(variance(d)));
        std::uniform_real_distribution<double> x(c - 3 * s, c + 3 * s);
        std::vector<double> data(static_cast<std::size_t>(size(rng)));
        for (double& v : data) v = x(rng);
        if (data.size() > 1 && coin(rng) == 0) data[1] = data[0];  // ties
        if (std::holds_alternative<PointValue>(d) && coin(rng) == 0) data[0] = std::get<PointValue>(d).value;
        ASSERT_NEAR(ks_statistic(data, d), oracle::ks_brute_force(data, d), 1e-12) << describe(d);
    }
}

TEST(BestFit, NormalDrawsRankNormalFirst) {
    const auto fits = best_fit(draws(Normal{50, 5}, 200, 1), kFive);
    ASSERT_EQ(fits.size(), 5u);
    EXPECT_EQ(fits.front().family, Family::normal);
}

TEST(BestFit, UniformDrawsRankUniformFirst) {
    const auto fits = best_fit(draws(Uniform{0, 1}, 200, 1), kFive);
    EXPECT_EQ(fits.front().family, Family::uniform);
}

TEST(BestFit, ZeroVarianceAdmitsOnlyPoint) {
    const auto fits = best_fit(std::vector<double>{10, 10, 10}, kFive);
    ASSERT_EQ(fits.size(), 1u);
    EXPECT_EQ(fits[0].family, Family::point);
    EXPECT_EQ(std::get<PointValue>(fits[0].fitted), PointValue{10});
    EXPECT_EQ(fits[0].ks_statistic, 0.0);
}

TEST(BestFit, NoFeasibleFamilyIsAnError) {
    const std::vector<Family> only_normal{Family::normal};
    EXPECT_THROW(best_fit(std::vector<double>{10, 10, 10}, only_normal), ValidationError);
    EXPECT_THROW(best_fit(std::vector<double>{1, 2}, only_normal), InsufficientDataError);
}

TEST(BestFit, BoundedFitsCoverEveryDataPoint) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto data = draws(testkit::random_effort(rng), 3 + trial % 20, 1000 + trial);
        for (const FitResult& f : best_fit(data, kFive)) {
            if (f.family != Family::uniform && f.family != Family::triangular) continue;
            const auto [lo, hi] = support(f.fitted);
            for (double x : data) {
                ASSERT_GE(x, lo) << describe(f.fitted);
                ASSERT_LE(x, hi) << describe(f.fitted);
            }
            ASSERT_TRUE(is_valid(f.fitted));
        }
    }
}

TEST(BestFit, RankingIsSortedAndDeterministic) {
    std::mt19937_64 rng(78);
    for (int trial = 0; trial < 100; ++trial) {
        const auto data = draws(testkit::random_effort(rng), 5 + trial % 30, 2000 + trial);
        const auto a = best_fit(data, kFive);
        const auto b = best_fit(data, kFive);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].family, b[i].family);
            EXPECT_EQ(a[i].ks_statistic, b[i].ks_statistic);
            EXPECT_EQ(a[i].sample_count, data.size());
            EXPECT_NEAR(a[i].ks_statistic, oracle::ks_brute_force(data, a[i].fitted), 1e-12);
            if (i > 0) {
                const bool ordered =
                    a[i - 1].ks_statistic < a[i].ks_statistic ||
                    (a[i - 1].ks_statistic == a[i].ks_statistic &&
                     (parameter_count(a[i - 1].family) < parameter_count(a[i].family) ||
                      (parameter_count(a[i - 1].family) == parameter_count(a[i].family) &&
                       a[i - 1].family < a[i].family)));
                EXPECT_TRUE(ordered);
            }
        }
    }
}

TEST(BestFit, DuplicateFamiliesAreFittedOnce) {
    const std::vector<Family> fams{Family::normal, Family::normal, Family::uniform};
    EXPECT_EQ(best_fit(std::vector<double>{1, 2, 4, 8}, fams).size(), 2u);
}
