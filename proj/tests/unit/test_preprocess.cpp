#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "streamad/preprocess.hpp"

using namespace streamad;

namespace {

Event raw(std::int64_t pid, std::int64_t ppid, std::int64_t uid, std::int64_t ret) {
    Event e;
    e.processId = pid;
    e.parentProcessId = ppid;
    e.userId = uid;
    e.returnValue = ret;
    return e;
}

}  // namespace

TEST(DeriveFlags, Thresholds) {
    auto e = derive_flags(raw(0, 0, 0, 0));
    EXPECT_EQ(e.processId_nonOS, 0);
    EXPECT_EQ(e.parentProcessId_nonOS, 0);
    EXPECT_EQ(e.userId_nonOS, 0);
    EXPECT_EQ(e.returnValue_error, 0);

    e = derive_flags(raw(2, 2, 999, 0));
    EXPECT_EQ(e.processId_nonOS, 0);
    EXPECT_EQ(e.parentProcessId_nonOS, 0);
    EXPECT_EQ(e.userId_nonOS, 0);

    e = derive_flags(raw(3, 381, 1000, -1));
    EXPECT_EQ(e.processId_nonOS, 1);
    EXPECT_EQ(e.parentProcessId_nonOS, 1);
    EXPECT_EQ(e.userId_nonOS, 1);
    EXPECT_EQ(e.returnValue_error, 1);
}

TEST(DeriveFlags, CustomThresholds) {
    FlagThresholds t;
    t.max_os_process_id = 100;
    t.min_user_id = 500;
    auto e = derive_flags(raw(50, 101, 500, 3), t);
    EXPECT_EQ(e.processId_nonOS, 0);
    EXPECT_EQ(e.parentProcessId_nonOS, 1);
    EXPECT_EQ(e.userId_nonOS, 1);
    EXPECT_EQ(e.returnValue_error, 0);
}

TEST(OrdinalEncoder, FirstAppearanceOrder) {
    OrdinalEncoder enc(2);
    EXPECT_EQ(enc.encode(0, "sshd"), 0);
    EXPECT_EQ(enc.encode(0, "ps"), 1);
    EXPECT_EQ(enc.encode(0, "sshd"), 0);
    EXPECT_EQ(enc.encode(1, "ps"), 0) << "columns are independent";
    EXPECT_EQ(enc.encode(0, ""), 2);
    EXPECT_EQ(enc.n_categories(0), 3u);
    EXPECT_THROW(enc.encode(2, "x"), std::out_of_range);
}

TEST(OrdinalEncoder, MatchesIndexOfFirstOccurrence) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        OrdinalEncoder enc(1);
        std::vector<std::string> seen;
        const auto alphabet = 1 + rng() % 40;
        for (int i = 0; i < 500; ++i) {
            const auto v = "c" + std::to_string(rng() % alphabet);
            auto it = std::find(seen.begin(), seen.end(), v);
            const int expected = static_cast<int>(it - seen.begin());
            if (it == seen.end()) seen.push_back(v);
            ASSERT_EQ(enc.encode(0, v), expected);
        }
    }
}

TEST(RunningScaler, NoneIsIdentity) {
    RunningScaler s(ScalerMode::None);
    std::vector<double> x{3.0, -7.5};
    s.scale_one(x);
    EXPECT_EQ(x, (std::vector<double>{3.0, -7.5}));
}

TEST(RunningScaler, FirstVectorAndZeroSpreadMapToZero) {
    for (auto mode : {ScalerMode::Standard, ScalerMode::MinMax}) {
        RunningScaler s(mode);
        std::vector<double> x{3.0, -7.5};
        s.scale_one(x);
        EXPECT_EQ(x, (std::vector<double>{0.0, 0.0})) << to_string(mode);
        std::vector<double> y{3.0, 1.0};
        s.scale_one(y);
        EXPECT_EQ(y[0], 0.0) << "constant column";
        EXPECT_GT(y[1], 0.0);
    }
}

TEST(RunningScaler, StandardMatchesBatchOnEveryPrefix) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(5.0, 3.0);
    RunningScaler s(ScalerMode::Standard);
    std::vector<std::vector<double>> seen;
    for (int i = 0; i < 300; ++i) {
        std::vector<double> x{g(rng), g(rng) * 100.0, 1e6 + g(rng)};
        seen.push_back(x);
        auto y = x;
        s.scale_one(y);
        for (std::size_t j = 0; j < x.size(); ++j) {
            double mean = 0;
            for (const auto& v : seen) mean += v[j];
            mean /= static_cast<double>(seen.size());
            double var = 0;
            for (const auto& v : seen) var += (v[j] - mean) * (v[j] - mean);
            var /= static_cast<double>(seen.size());
            EXPECT_NEAR(s.mean(j), mean, 1e-9 * std::max(1.0, std::abs(mean)));
            EXPECT_NEAR(s.variance(j), var, 1e-9 * std::max(1.0, var));
            const double expected = var > 0 ? (x[j] - mean) / std::sqrt(var) : 0.0;
            EXPECT_NEAR(y[j], expected, 1e-6);
        }
    }
}

TEST(RunningScaler, MinMaxInUnitInterval) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-50, 50);
    RunningScaler s(ScalerMode::MinMax);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> x{u(rng), u(rng)};
        s.scale_one(x);
        for (double v : x) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Schema, DefaultColumns) {
    const auto plain = default_schema(false);
    ASSERT_EQ(plain.size(), 8u);
    EXPECT_EQ(plain.front(), "processId_nonOS");
    EXPECT_EQ(plain.back(), "eventName");
    const auto rich = default_schema(true);
    ASSERT_EQ(rich.size(), 9u);
    EXPECT_EQ(rich.back(), "parentProcessName");
    EXPECT_NE(schema_hash(plain), schema_hash(rich));
    EXPECT_EQ(schema_hash(plain), schema_hash(default_schema(false)));
}

TEST(Schema, UnknownColumnRejected) {
    std::vector<std::string> bad{"eventId", "args"};
    EXPECT_THROW(make_prepared(bad), InvalidParameter);
    EXPECT_THROW(FeaturePipeline(bad, ScalerMode::None), InvalidParameter);
    EXPECT_TRUE(is_categorical_column("processName"));
    EXPECT_FALSE(is_categorical_column("eventId"));
    EXPECT_TRUE(is_known_column("hostName"));
    EXPECT_FALSE(is_known_column("stackAddresses"));
}

TEST(ScalerFor, Assignment) {
    EXPECT_EQ(scaler_for(DetectorKind::OCSVM), ScalerMode::Standard);
    EXPECT_EQ(scaler_for(DetectorKind::HSTree), ScalerMode::MinMax);
    for (auto k : kAllDetectorKinds) {
        if (k != DetectorKind::OCSVM && k != DetectorKind::HSTree) {
            EXPECT_EQ(scaler_for(k), ScalerMode::None) << to_string(k);
        }
    }
}

TEST(FeaturePipeline, EncodesInStreamOrder) {
    FeaturePipeline p(default_schema(true), ScalerMode::None);
    Event a = derive_flags(raw(381, 1, 100, -2));
    a.eventId = 257;
    a.argsNum = 4;
    a.processName = "close";
    a.eventName = "openat";
    a.parentProcessName = "systemd";
    EXPECT_EQ(p.build(a), (FeatureVector{1, 0, 0, 1, 257, 4, 0, 0, 0}));

    Event b = a;
    b.processName = "ps";
    b.parentProcessName.reset();  // falls back to "unknown"
    EXPECT_EQ(p.build(b), (FeatureVector{1, 0, 0, 1, 257, 4, 1, 0, 1}));
    EXPECT_EQ(p.build(a), (FeatureVector{1, 0, 0, 1, 257, 4, 0, 0, 0}));
}

TEST(PreparedData, AppendKeepsTextAndLabels) {
    auto data = make_prepared(default_schema(false));
    Event e = derive_flags(raw(5, 1, 0, 0));
    e.processName = "a,b";
    e.eventName = "x";
    e.evil = 1;
    data.append(e);
    EXPECT_EQ(data.n_rows, 1u);
    EXPECT_EQ(data.n_categorical(), 2u);
    EXPECT_EQ(data.text, (std::vector<std::string>{"a,b", "x"}));
    EXPECT_EQ(data.evil[0], 1);
    EXPECT_EQ(data.sus[0], 0);
    EXPECT_EQ(data.numeric.size(), 8u);
}

TEST(ColumnText, RendersFields) {
    Event e;
    e.timestamp = 1809.495787;
    e.eventId = 157;
    e.processName = "close";
    EXPECT_EQ(column_text(e, "eventId"), "157");
    EXPECT_EQ(column_text(e, "processName"), "close");
    EXPECT_EQ(std::stod(column_text(e, "timestamp")), 1809.495787);
    EXPECT_EQ(column_text(e, "parentProcessName"), "unknown");
}
