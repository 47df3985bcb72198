#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "streamad/detectors/loda.hpp"
#include "toy_streams.hpp"

using namespace streamad;

namespace {

double project(const LODA::Projection& p, const std::vector<double>& x) {
    double z = 0;
    for (std::size_t j = 0; j < p.index.size(); ++j) z += p.weight[j] * x[p.index[j]];
    return z;
}

}  // namespace

TEST(LODA, WarmupScoresAreConstant) {
    LODAParams p;
    LODA d(p, 1);
    for (const auto& x : toy::gaussian_points(256, 4, 1)) {
        ASSERT_EQ(d.process_one(x), std::log(100.0));
    }
    EXPECT_TRUE(d.ready());
}

TEST(LODA, SparseProjections) {
    LODA d(LODAParams{}, 3);
    d.learn_one(std::vector<double>(9, 0.0));
    ASSERT_EQ(d.projections().size(), 100u);
    for (const auto& p : d.projections()) {
        EXPECT_EQ(p.index.size(), 3u) << "ceil(sqrt(9)) non-zeros";
        EXPECT_TRUE(std::is_sorted(p.index.begin(), p.index.end()));
        EXPECT_EQ(std::adjacent_find(p.index.begin(), p.index.end()), p.index.end());
    }
}

// Histogram densities recomputed from every learned vector.
TEST(LODA, MatchesDirectHistogramDensity) {
    LODAParams p;
    p.n_projections = 20;
    p.n_bins = 10;
    p.window = 50;
    LODA d(p, 7);
    auto pts = toy::gaussian_points(400, 5, 2);
    pts[300] = {9, 9, 9, 9, 9};
    std::vector<std::vector<double>> learned;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double got = d.process_one(pts[i]);
        if (i >= 50) {
            double expected = 0;
            for (const auto& proj : d.projections()) {
                std::vector<double> warm;
                for (std::size_t r = 0; r < 50; ++r) warm.push_back(project(proj, learned[r]));
                double lo = *std::min_element(warm.begin(), warm.end());
                double hi = *std::max_element(warm.begin(), warm.end());
                const double width = (hi - lo) / 10.0;
                auto bin = [&](double z) {
                    return std::clamp(std::floor((z - lo) / width), 0.0, 9.0);
                };
                double c = 0;
                for (const auto& y : learned) c += bin(project(proj, y)) == bin(project(proj, pts[i]));
                expected += -std::log((c + 1.0) / (static_cast<double>(learned.size()) + 10.0));
            }
            expected /= 20.0;
            ASSERT_NEAR(got, expected, 1e-9) << i;
        }
        learned.push_back(pts[i]);
    }
}

TEST(LODA, FarProbeAboveRepeatedPoint) {
    LODA d(LODAParams{}, 5);
    auto pts = toy::gaussian_points(300, 3, 4, 0.0, 0.1);
    const std::vector<double> repeated{0.0, 0.0, 0.0};
    for (const auto& x : pts) d.process_one(x);
    for (int i = 0; i < 500; ++i) d.process_one(repeated);
    EXPECT_GT(d.score_one(std::vector<double>{50.0, -50.0, 50.0}), d.score_one(repeated));
}

TEST(LODA, ConstantWarmupWidensRange) {
    LODAParams p;
    p.window = 10;
    LODA d(p, 2);
    for (int i = 0; i < 10; ++i) d.process_one(std::vector<double>{1.0, 1.0});
    for (const auto& proj : d.projections()) EXPECT_GT(proj.width, 0.0);
    EXPECT_TRUE(std::isfinite(d.score_one(std::vector<double>{1.0, 1.0})));
}
