#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "badlab/rng.hpp"
#include "badlab/stats.hpp"

using namespace badlab;

TEST(Descriptive, TextbookValues) {
    const std::vector<double> v = {1, 2, 3};
    EXPECT_DOUBLE_EQ(stats::mean(v), 2.0);
    EXPECT_DOUBLE_EQ(stats::sd(v), 1.0);
}

TEST(Descriptive, QuantileType7) {
    std::vector<double> v;
    for (int i = 1; i <= 10; ++i) v.push_back(i);
    EXPECT_DOUBLE_EQ(stats::quantile(v, 0.25), 3.25);
    EXPECT_DOUBLE_EQ(stats::quantile(v, 0.5), 5.5);
    EXPECT_DOUBLE_EQ(stats::iqr(v), 4.5);
}

TEST(Descriptive, PearsonUndefinedForConstantColumn) {
    const std::vector<double> x = {1, 1, 1, 1}, y = {1, 2, 3, 4};
    EXPECT_FALSE(stats::pearson(x, y).has_value());
    EXPECT_NEAR(*stats::pearson(y, y), 1.0, 1e-15);
}

// Reference values computed with scipy.stats / scipy.special.
TEST(NormalCdf, MatchesReference) {
    EXPECT_NEAR(stats::normal_cdf(1.6), 0.945200708300442, 1e-12);
    EXPECT_NEAR(stats::normal_cdf(2.6), 0.9953388119762813, 1e-12);
    EXPECT_NEAR(stats::normal_cdf(-3.0), 0.0013498980316300933, 1e-14);
    EXPECT_DOUBLE_EQ(stats::normal_cdf(0.0), 0.5);
}

TEST(IncompleteBeta, MatchesReference) {
    EXPECT_NEAR(stats::incomplete_beta(2, 3, 0.5), 0.6875, 1e-12);
    EXPECT_NEAR(stats::incomplete_beta(0.5, 7.5, 0.2), 0.9281204024988001, 1e-9);
    EXPECT_NEAR(stats::incomplete_beta(30, 40, 0.45), 0.6447480085585666, 1e-9);
    EXPECT_EQ(stats::incomplete_beta(2, 3, 0.0), 0.0);
    EXPECT_EQ(stats::incomplete_beta(2, 3, 1.0), 1.0);
}

TEST(StudentT, MatchesReference) {
    EXPECT_NEAR(stats::student_t_two_sided_p(2.228138851986, 10), 0.05, 1e-9);
    EXPECT_NEAR(stats::student_t_cdf(-1.5, 3), 0.11529193262241141, 1e-9);
    EXPECT_NEAR(stats::student_t_cdf(0.7, 1), 0.6944001122142147, 1e-9);
    EXPECT_DOUBLE_EQ(stats::student_t_two_sided_p(0.0, 5), 1.0);
}

TEST(StudentT, ApproachesNormalForLargeDf) {
    for (double df : {1000.0, 5000.0, 1e5})
        for (double t = -4; t <= 4; t += 0.25) EXPECT_NEAR(stats::student_t_cdf(t, df), stats::normal_cdf(t), 1e-3);
}

TEST(Rng, SameSeedSameStream) {
    Rng a(123), b(123), c(124);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differs |= x != c.next_u64();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, NormalMoments) {
    Rng r(5);
    std::vector<double> v(200000);
    for (auto& x : v) x = r.normal();
    EXPECT_NEAR(stats::mean(v), 0.0, 0.01);
    EXPECT_NEAR(stats::sd(v), 1.0, 0.01);
}

TEST(Rng, BelowIsInRangeAndUniform) {
    Rng r(9);
    std::vector<int> counts(3, 0);
    for (int i = 0; i < 30000; ++i) {
        const auto k = r.below(3);
        ASSERT_LT(k, 3u);
        ++counts[k];
    }
    for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}
