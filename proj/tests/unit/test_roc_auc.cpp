#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "streamad/core.hpp"
#include "streamad/roc_auc.hpp"

using namespace streamad;

namespace {

double pairwise_auc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!y[i]) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j]) continue;
            pairs += 1;
            wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
        }
    }
    return wins / pairs;
}

std::vector<double> negate(std::vector<double> s) {
    for (auto& v : s) v = -v;
    return s;
}

}  // namespace

TEST(RocAuc, TrivialCases) {
    EXPECT_EQ(roc_auc(std::vector<double>{1, 0}, std::vector<std::uint8_t>{1, 0}), 1.0);
    EXPECT_EQ(roc_auc(std::vector<double>{0, 1}, std::vector<std::uint8_t>{1, 0}), 0.0);
    EXPECT_EQ(roc_auc(std::vector<double>{3, 3, 3, 3}, std::vector<std::uint8_t>{1, 0, 1, 0}), 0.5);
}

TEST(RocAuc, Errors) {
    EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<std::uint8_t>{1, 1}), DegenerateLabels);
    EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<std::uint8_t>{0, 0}), DegenerateLabels);
    EXPECT_THROW(roc_auc(std::vector<double>{}, std::vector<std::uint8_t>{}), DegenerateLabels);
    EXPECT_THROW(roc_auc(std::vector<double>{1}, std::vector<std::uint8_t>{1, 0}), Error);
    EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<std::uint8_t>{1, 2}), Error);
    EXPECT_THROW(roc_auc(std::vector<double>{NAN, 2}, std::vector<std::uint8_t>{1, 0}), Error);
}

TEST(RocAuc, MatchesPairwiseOracleWithTies) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 80;
        std::vector<double> s(n);
        std::vector<std::uint8_t> y(n);
        const auto levels = 1 + rng() % 12;  // few levels -> many ties
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng() % levels) * 0.25;
            y[i] = rng() % 3 == 0;
        }
        y[0] = 1;
        y[1] = 0;
        EXPECT_NEAR(roc_auc(s, y), pairwise_auc(s, y), 1e-12);
    }
}

TEST(RocAuc, InversionIdentityIsExact) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 300;
        std::vector<double> s(n);
        std::vector<std::uint8_t> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = trial % 2 ? std::round(g(rng) * 3) : g(rng);
            y[i] = rng() % 4 == 0;
        }
        y[0] = 1;
        y[1] = 0;
        const double a = roc_auc(s, y);
        const double b = roc_auc(negate(s), y);
        EXPECT_EQ(b, 1.0 - a);
        EXPECT_EQ(a, 1.0 - b);
    }
}

TEST(RocAuc, InvariantUnderIncreasingTransforms) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> s(100), e(100), a(100);
        std::vector<std::uint8_t> y(100);
        for (std::size_t i = 0; i < 100; ++i) {
            s[i] = std::round(u(rng) * 4) / 4;
            e[i] = std::exp(s[i]);
            a[i] = 3.0 * s[i] + 7.0;
            y[i] = rng() % 2;
        }
        y[0] = 1;
        y[1] = 0;
        EXPECT_EQ(roc_auc(s, y), roc_auc(e, y));
        EXPECT_EQ(roc_auc(s, y), roc_auc(a, y));
    }
}
