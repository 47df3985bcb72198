#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "streamad/detectors/iforest_asd.hpp"

using namespace streamad;

namespace {

std::vector<std::vector<double>> uniform_cluster(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.4, 0.6);
    std::vector<std::vector<double>> pts(n, std::vector<double>(2));
    for (auto& p : pts)
        for (auto& v : p) v = u(rng);
    return pts;
}

}  // namespace

TEST(IForest, AveragePathLength) {
    EXPECT_EQ(average_path_length(0), 0.0);
    EXPECT_EQ(average_path_length(1), 0.0);
    EXPECT_EQ(average_path_length(2), 1.0);
    // 2 H(255) - 2 * 255 / 256 with H(i) ~ ln(i) + gamma.
    EXPECT_NEAR(average_path_length(256), 10.244770920119917, 1e-12);
}

TEST(IForestASD, ColdStartThenFit) {
    IForestASDParams p;
    p.window = 64;
    IForestASD d(p, 3);
    auto pts = uniform_cluster(64, 1);
    for (std::size_t i = 0; i < 64; ++i) ASSERT_EQ(d.process_one(pts[i]), 0.5);
    EXPECT_TRUE(d.forest().fitted());
    EXPECT_EQ(d.stored_points(), 0u);
    EXPECT_NE(d.score_one(pts[0]), 0.5);
}

TEST(IForestASD, MatchesBatchForestOnSameWindowAndSeed) {
    IForestASDParams p;
    p.window = 300;
    p.n_trees = 50;
    p.subsample = 128;
    IForestASD d(p, 42);
    auto pts = uniform_cluster(299, 2);
    pts.push_back({0.95, 0.05});
    for (const auto& x : pts) d.process_one(x);

    std::vector<double> flat;
    for (const auto& x : pts) flat.insert(flat.end(), x.begin(), x.end());
    IsolationForest batch;
    Rng rng(42);
    batch.fit(flat, 2, p.n_trees, p.subsample, rng);

    double cluster_mean = 0;
    for (std::size_t i = 0; i < 299; ++i) {
        ASSERT_EQ(d.score_one(pts[i]), batch.score(pts[i]));
        cluster_mean += d.score_one(pts[i]) / 299.0;
    }
    const double outlier = d.score_one(pts.back());
    EXPECT_EQ(outlier, batch.score(pts.back()));
    EXPECT_GT(outlier, 0.5);
    EXPECT_LT(cluster_mean, outlier);
}

TEST(IForestASD, RefitsEveryWindow) {
    IForestASDParams p;
    p.window = 50;
    p.n_trees = 10;
    IForestASD d(p, 1);
    auto a = uniform_cluster(50, 3);
    for (const auto& x : a) d.process_one(x);
    const double s1 = d.score_one(std::vector<double>{0.5, 0.5});
    auto b = uniform_cluster(49, 4);
    for (auto& x : b) x[0] += 5.0;
    for (const auto& x : b) d.process_one(x);
    EXPECT_EQ(d.score_one(std::vector<double>{0.5, 0.5}), s1) << "no refit before the window fills";
    d.process_one(std::vector<double>{5.5, 0.5});
    EXPECT_GT(d.score_one(std::vector<double>{0.5, 0.5}), s1);
    EXPECT_LE(d.stored_points(), 50u);
}

TEST(IsolationForest, ConstantDataScoresUniformly) {
    std::vector<double> flat(40, 1.0);
    IsolationForest f;
    Rng rng(0);
    f.fit(flat, 2, 5, 16, rng);
    EXPECT_EQ(f.score(std::vector<double>{1.0, 1.0}), f.score(std::vector<double>{9.0, -9.0}));
}
