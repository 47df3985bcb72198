#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "streamad/detectors/ilof.hpp"
#include "toy_streams.hpp"

using namespace streamad;

namespace {

using Points = std::vector<std::vector<double>>;

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Textbook LOF of the last point of `pts`, recomputed from scratch; every
// point is an instance (duplicates included) and ties at the k-distance
// join the neighbourhood.
double batch_lof_of_last(const Points& pts, std::size_t k) {
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = dist(pts[i], pts[j]);
    std::vector<double> kdist(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> others;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) others.push_back(d[i][j]);
        std::sort(others.begin(), others.end());
        kdist[i] = others[std::min(k, others.size()) - 1];
    }
    auto neighbours = [&](std::size_t i) {
        std::vector<std::size_t> nb;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && d[i][j] <= kdist[i]) nb.push_back(j);
        return nb;
    };
    auto lrd = [&](std::size_t i) {
        double reach = 0;
        const auto nb = neighbours(i);
        for (auto j : nb) reach += std::max(kdist[j], d[i][j]);
        return 1.0 / (reach / static_cast<double>(nb.size()) + 1e-10);
    };
    const std::size_t x = n - 1;
    double s = 0;
    const auto nb = neighbours(x);
    for (auto j : nb) s += lrd(j);
    return s / static_cast<double>(nb.size()) / lrd(x);
}

void expect_matches_batch(const Points& stream, std::size_t k, std::size_t max_points) {
    ILOFParams p;
    p.k_neighbors = static_cast<int>(k);
    p.max_points = static_cast<int>(max_points);
    IncrementalLOF lof(p);
    std::deque<std::vector<double>> memory;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const double got = lof.process_one(stream[i]);
        double expected = 1.0;
        if (memory.size() >= k) {
            Points pts(memory.begin(), memory.end());
            pts.push_back(stream[i]);
            expected = batch_lof_of_last(pts, k);
        }
        ASSERT_NEAR(got, expected, 1e-6 * std::max(1.0, std::abs(expected)))
            << "event " << i << " k=" << k << " max_points=" << max_points;
        memory.push_back(stream[i]);
        if (memory.size() > max_points) memory.pop_front();
        ASSERT_EQ(lof.stored_points(), memory.size());
    }
}

Points blob_with_outliers(std::size_t n, std::uint64_t seed) {
    auto pts = toy::gaussian_points(n, 2, seed);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 15; i < n; i += 23) pts[i] = {8.0 + static_cast<double>(rng() % 5), -6.0};
    return pts;
}

// Small integer grid: many exact duplicates and distance ties.
Points lattice(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Points pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({static_cast<double>(rng() % 4), static_cast<double>(rng() % 3)});
    }
    return pts;
}

}  // namespace

TEST(ILOF, ColdStartIsOne) {
    IncrementalLOF lof(ILOFParams{});
    for (int i = 0; i < 10; ++i) {
        ASSERT_EQ(lof.process_one(std::vector<double>{static_cast<double>(i * i), 1.0}), 1.0);
    }
    EXPECT_NE(lof.process_one(std::vector<double>{100.0, 1.0}), 1.0);
}

TEST(ILOF, IdenticalPointsHaveUnitLof) {
    IncrementalLOF lof(ILOFParams{});
    const std::vector<double> x{0.25, 4.0};
    for (int i = 0; i < 10; ++i) lof.process_one(x);
    EXPECT_DOUBLE_EQ(lof.score_one(x), 1.0);
    EXPECT_EQ(lof.distinct_points(), 1u);
    EXPECT_EQ(lof.stored_points(), 10u);
}

TEST(ILOF, MatchesBatchLofWithoutEviction) {
    expect_matches_batch(blob_with_outliers(200, 1), 10, 2000);
    expect_matches_batch(blob_with_outliers(200, 2), 3, 2000);
}

TEST(ILOF, MatchesBatchLofWithEviction) {
    expect_matches_batch(blob_with_outliers(200, 3), 10, 40);
    expect_matches_batch(blob_with_outliers(200, 4), 5, 6);
    expect_matches_batch(blob_with_outliers(200, 5), 1, 2);
}

TEST(ILOF, MatchesBatchLofWithDuplicatesAndTies) {
    expect_matches_batch(lattice(200, 6), 10, 2000);
    expect_matches_batch(lattice(200, 7), 4, 25);
    expect_matches_batch(lattice(200, 8), 2, 3);
}

TEST(ILOF, PlantedOutlierScoresHigh) {
    IncrementalLOF lof(ILOFParams{});
    for (const auto& p : toy::gaussian_points(30, 2, 9)) lof.process_one(p);
    const double inlier = lof.score_one(std::vector<double>{0.1, -0.1});
    const double outlier = lof.score_one(std::vector<double>{9.0, 9.0});
    EXPECT_GT(outlier, 2.0);
    EXPECT_GT(outlier, inlier);
}

TEST(ILOF, MemoryNeverExceedsCap) {
    ILOFParams p;
    p.max_points = 100;
    IncrementalLOF lof(p);
    for (const auto& x : toy::gaussian_points(2000, 3, 10)) {
        lof.process_one(x);
        ASSERT_LE(lof.stored_points(), 100u);
    }
}
