#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "touchauth/error.hpp"
#include "touchauth/features.hpp"

using namespace touchauth;

namespace {

struct P {
    std::int64_t t;
    double x, y;
    double pressure = 0.5;
    double area = 0.1;
    double finger = 0.0;
};

Stroke make_stroke(std::int64_t user, const std::vector<P>& pts, std::int64_t doc = 1) {
    Stroke s;
    s.user_id = user;
    s.phone_id = 2;
    s.doc_id = doc;
    for (const auto& p : pts) s.points.push_back({p.t, p.x, p.y, p.pressure, p.area, p.finger});
    return s;
}

double f(const std::array<double, kFeatureCount>& v, FeatureId id) { return v[static_cast<std::size_t>(id)]; }

// Reference percentile written independently of the library.
double ref_percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double r = q / 100.0 * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(r));
    const auto hi = static_cast<std::size_t>(std::ceil(r));
    return v[lo] + (r - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Stroke random_stroke(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::vector<P> pts;
    std::int64_t t = static_cast<std::int64_t>(rng() % 1000);
    double x = u(rng), y = u(rng);
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({t, x, y, 0.3 + 0.01 * static_cast<double>(i), 0.2, 0.1 * static_cast<double>(i)});
        t += 1 + static_cast<std::int64_t>(rng() % 20);
        x += u(rng) * 0.3;
        y += u(rng) * 0.3;
    }
    return make_stroke(1, pts);
}

}  // namespace

TEST(Percentile, Examples) {
    const std::vector<double> v = {1, 2, 3, 4, 5};
    EXPECT_DOUBLE_EQ(percentile(v, 50), 3.0);
    EXPECT_DOUBLE_EQ(percentile(v, 20), 1.8);
    const std::vector<double> one = {7};
    EXPECT_DOUBLE_EQ(percentile(one, 80), 7.0);
    EXPECT_DOUBLE_EQ(percentile(v, 0), 1.0);
    EXPECT_DOUBLE_EQ(percentile(v, 100), 5.0);
}

TEST(Percentile, UnsortedInputAndEmpty) {
    const std::vector<double> v = {5, 1, 4, 2, 3};
    EXPECT_DOUBLE_EQ(percentile(v, 20), 1.8);
    EXPECT_THROW(percentile(std::vector<double>{}, 50), Error);
    try {
        percentile(std::vector<double>{}, 50);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptySamples);
    }
}

TEST(Percentile, MedianBothParities) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-10, 10);
    for (std::size_t m = 1; m <= 30; ++m) {
        std::vector<double> v(m);
        for (auto& x : v) x = u(rng);
        auto s = v;
        std::sort(s.begin(), s.end());
        const double textbook = m % 2 ? s[m / 2] : (s[m / 2 - 1] + s[m / 2]) / 2.0;
        EXPECT_NEAR(percentile(v, 50), textbook, 1e-12);
        EXPECT_NEAR(median(v), textbook, 1e-12);
        for (double q : {20.0, 80.0, 33.0}) EXPECT_NEAR(percentile(v, q), ref_percentile(v, q), 1e-12);
    }
}

TEST(FeatureSchema, NamesUniqueAndRoundTrip) {
    const auto schema = default_schema();
    ASSERT_EQ(schema.size(), kFeatureCount);
    std::set<std::string> names;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        EXPECT_EQ(static_cast<std::size_t>(schema[i]), i);
        const auto name = std::string(feature_name(schema[i]));
        names.insert(name);
        EXPECT_EQ(feature_from_name(name), schema[i]);
    }
    EXPECT_EQ(names.size(), kFeatureCount);
    EXPECT_EQ(feature_name(FeatureId::InterStrokeTime), "inter_stroke_time");
    EXPECT_EQ(feature_name(FeatureId::PhoneOrientation), "phone_orientation");
    EXPECT_FALSE(feature_from_name("no_such_feature"));
}

TEST(ExtractFeatures, StraightConstantSpeedLine) {
    const auto v = extract_features(make_stroke(1, {{0, 0, 0}, {100, 10, 0}, {200, 20, 0}}));
    EXPECT_DOUBLE_EQ(f(v, FeatureId::LengthOfTrajectory), 20.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::DirectEndToEndDistance), 20.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::RatioEndToEndOverTrajectory), 1.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::MeanResultantLength), 1.0);
    EXPECT_EQ(f(v, FeatureId::UpDownLeftRightFlag), static_cast<double>(SwipeDirection::Right));
    EXPECT_DOUBLE_EQ(f(v, FeatureId::PairwiseVelocityP20), 0.1);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::PairwiseVelocityP50), 0.1);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::PairwiseVelocityP80), 0.1);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::StrokeDuration), 200.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::InterStrokeTime), 0.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::PairwiseAccelerationP50), 0.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::LargestDeviationFromLine), 0.0);
}

TEST(ExtractFeatures, ThreeFourFiveStroke) {
    const auto v = extract_features(make_stroke(1, {{0, 0, 0, 0.5}, {100, 3, 4, 0.5}, {200, 6, 8, 0.5}}));
    EXPECT_DOUBLE_EQ(f(v, FeatureId::DirectEndToEndDistance), 10.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::AverageVelocity), 0.05);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::MidstrokePressure), 0.5);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::DirectionOfEndToEnd), std::atan2(8.0, 6.0));
    EXPECT_EQ(f(v, FeatureId::UpDownLeftRightFlag), static_cast<double>(SwipeDirection::Down));
}

TEST(ExtractFeatures, LShapedDeviation) {
    const auto v = extract_features(make_stroke(1, {{0, 0, 0}, {10, 10, 0}, {20, 10, 10}}));
    EXPECT_NEAR(f(v, FeatureId::LargestDeviationFromLine), 10.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(f(v, FeatureId::LengthOfTrajectory), 20.0, 1e-12);
    EXPECT_NEAR(f(v, FeatureId::RatioEndToEndOverTrajectory), std::sqrt(200.0) / 20.0, 1e-12);
    // headings 0 and pi/2: resultant (1,1)/2
    EXPECT_NEAR(f(v, FeatureId::MeanResultantLength), std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(f(v, FeatureId::LineAverageDirection), std::atan2(1.0, 1.0), 1e-12);
}

TEST(ExtractFeatures, DirectionFlag) {
    auto flag = [](double dx, double dy) {
        return f(extract_features(make_stroke(1, {{0, 0, 0}, {10, dx, dy}})), FeatureId::UpDownLeftRightFlag);
    };
    EXPECT_EQ(flag(0, -5), static_cast<double>(SwipeDirection::Up));
    EXPECT_EQ(flag(1, 5), static_cast<double>(SwipeDirection::Down));
    EXPECT_EQ(flag(-5, 1), static_cast<double>(SwipeDirection::Left));
    EXPECT_EQ(flag(5, -1), static_cast<double>(SwipeDirection::Right));
    EXPECT_EQ(flag(5, 5), static_cast<double>(SwipeDirection::Right));  // ties go to the horizontal axis
}

TEST(ExtractFeatures, AccelerationAndVelocityMedians) {
    // velocities 1, 2, 4 px/ms over dt = 10, 10, 20
    const auto s = make_stroke(1, {{0, 0, 0}, {10, 10, 0}, {20, 30, 0}, {40, 110, 0}});
    const auto v = extract_features(s);
    // a_1 = (2-1)/(20-0)*2 = 0.1, a_2 = (4-2)/(40-10)*2 = 2/15
    const std::vector<double> accel = {0.1, 2.0 / 15.0};
    EXPECT_NEAR(f(v, FeatureId::PairwiseAccelerationP20), ref_percentile(accel, 20), 1e-12);
    EXPECT_NEAR(f(v, FeatureId::PairwiseAccelerationP50), ref_percentile(accel, 50), 1e-12);
    EXPECT_NEAR(f(v, FeatureId::PairwiseAccelerationP80), ref_percentile(accel, 80), 1e-12);
    EXPECT_NEAR(f(v, FeatureId::MedianAccelFirst5), (0.1 + 2.0 / 15.0) / 2.0, 1e-12);
    EXPECT_NEAR(f(v, FeatureId::MedianVelocityLast3), 2.0, 1e-12);
    EXPECT_NEAR(f(v, FeatureId::PairwiseVelocityP50), 2.0, 1e-12);
}

TEST(ExtractFeatures, TwoPointStrokeHasZeroAcceleration) {
    const auto v = extract_features(make_stroke(1, {{0, 0, 0}, {10, 3, 4}}));
    EXPECT_EQ(f(v, FeatureId::PairwiseAccelerationP20), 0.0);
    EXPECT_EQ(f(v, FeatureId::MedianAccelFirst5), 0.0);
    EXPECT_DOUBLE_EQ(f(v, FeatureId::MedianVelocityLast3), 0.5);
}

TEST(ExtractFeatures, MidstrokeUsesCeilHalfPoint) {
    const auto v = extract_features(make_stroke(1, {{0, 0, 0, 0.1, 1, 0.5},
                                                    {10, 1, 0, 0.2, 2, 0.6},
                                                    {20, 2, 0, 0.3, 3, 0.7},
                                                    {30, 3, 0, 0.4, 4, 0.9}}));
    EXPECT_EQ(f(v, FeatureId::MidstrokePressure), 0.2);
    EXPECT_EQ(f(v, FeatureId::MidstrokeArea), 2.0);
    EXPECT_EQ(f(v, FeatureId::MidstrokeFingerOrientation), 0.6);
    EXPECT_NEAR(f(v, FeatureId::ChangeOfFingerOrientation), 0.4, 1e-15);
}

TEST(ExtractFeatures, PassThroughs) {
    auto s = make_stroke(1, {{0, 0, 0}, {10, 1, 1}});
    s.phone_id = 4;
    s.phone_orientation = Orientation::Landscape;
    const auto v = extract_features(s);
    EXPECT_EQ(f(v, FeatureId::PhoneId), 4.0);
    EXPECT_EQ(f(v, FeatureId::PhoneOrientation), 1.0);
}

TEST(ExtractFeatures, InterStrokeTimeFromPrevious) {
    const auto a = make_stroke(1, {{0, 0, 0}, {50, 1, 1}});
    const auto b = make_stroke(1, {{80, 0, 0}, {90, 1, 1}});
    EXPECT_EQ(f(extract_features(b, &a), FeatureId::InterStrokeTime), 30.0);
}

TEST(ExtractFeatures, DegenerateStroke) {
    try {
        extract_features(make_stroke(1, {{5, 0, 0}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateStroke);
    }
}

TEST(ExtractFeatures, ReferenceComputationOnRandomStrokes) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_stroke(rng, 2 + rng() % 15);
        const auto v = extract_features(s);
        const auto& p = s.points;
        double length = 0.0;
        std::vector<double> vel;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const double seg = std::hypot(p[i + 1].x - p[i].x, p[i + 1].y - p[i].y);
            length += seg;
            vel.push_back(seg / static_cast<double>(p[i + 1].time_ms - p[i].time_ms));
        }
        const double dx = p.back().x - p.front().x, dy = p.back().y - p.front().y;
        const double chord = std::hypot(dx, dy);
        double largest = 0.0;
        std::vector<double> signed_dev;
        for (const auto& q : p) {
            const double cross = dx * (q.y - p.front().y) - dy * (q.x - p.front().x);
            signed_dev.push_back(chord > 0 ? cross / chord : 0.0);
            largest = std::max(largest, std::abs(signed_dev.back()));
        }
        EXPECT_NEAR(f(v, FeatureId::LengthOfTrajectory), length, 1e-9);
        EXPECT_NEAR(f(v, FeatureId::DirectEndToEndDistance), chord, 1e-9);
        EXPECT_NEAR(f(v, FeatureId::PairwiseVelocityP20), ref_percentile(vel, 20), 1e-9);
        EXPECT_NEAR(f(v, FeatureId::PairwiseVelocityP80), ref_percentile(vel, 80), 1e-9);
        EXPECT_NEAR(f(v, FeatureId::LargestDeviationFromLine), largest, 1e-9);
        // sign convention of the signed deviations is not fixed, compare magnitudes of the spread
        auto neg = signed_dev;
        for (auto& d : neg) d = -d;
        const double p50 = f(v, FeatureId::DeviationP50);
        EXPECT_TRUE(std::abs(p50 - ref_percentile(signed_dev, 50)) < 1e-9 ||
                    std::abs(p50 - ref_percentile(neg, 50)) < 1e-9);
        EXPECT_NEAR(f(v, FeatureId::AverageVelocity), length / f(v, FeatureId::StrokeDuration), 1e-12);
    }
}

TEST(ExtractFeatures, RangesHoldOnRandomStrokes) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        const auto v = extract_features(random_stroke(rng, 2 + rng() % 20));
        const double mrl = f(v, FeatureId::MeanResultantLength);
        EXPECT_GE(mrl, 0.0);
        EXPECT_LE(mrl, 1.0 + 1e-12);
        const double ratio = f(v, FeatureId::RatioEndToEndOverTrajectory);
        EXPECT_GT(ratio, 0.0);
        EXPECT_LE(ratio, 1.0 + 1e-12);
        const double largest = f(v, FeatureId::LargestDeviationFromLine);
        EXPECT_GE(largest + 1e-12, std::abs(f(v, FeatureId::DeviationP20)));
        EXPECT_GE(largest + 1e-12, std::abs(f(v, FeatureId::DeviationP80)));
        for (double x : v) EXPECT_TRUE(std::isfinite(x));
    }
}

TEST(ExtractFeatures, MrlIsOneOnlyForIdenticalHeadings) {
    const auto bent = extract_features(make_stroke(1, {{0, 0, 0}, {10, 10, 0}, {20, 20, 1}}));
    EXPECT_LT(f(bent, FeatureId::MeanResultantLength), 1.0);
    const auto straight = extract_features(make_stroke(1, {{0, 0, 0}, {10, 3, 3}, {30, 9, 9}}));
    EXPECT_NEAR(f(straight, FeatureId::MeanResultantLength), 1.0, 1e-15);
}

TEST(ExtractFeatures, TranslationInvariance) {
    std::mt19937_64 rng(10);
    const FeatureId invariant[] = {
        FeatureId::InterStrokeTime,         FeatureId::StrokeDuration,          FeatureId::DirectEndToEndDistance,
        FeatureId::MeanResultantLength,     FeatureId::PairwiseVelocityP20,     FeatureId::PairwiseVelocityP50,
        FeatureId::PairwiseVelocityP80,     FeatureId::PairwiseAccelerationP20, FeatureId::PairwiseAccelerationP50,
        FeatureId::PairwiseAccelerationP80, FeatureId::MedianVelocityLast3,     FeatureId::LargestDeviationFromLine,
        FeatureId::DeviationP20,            FeatureId::DeviationP50,            FeatureId::DeviationP80,
        FeatureId::LineAverageDirection,    FeatureId::LengthOfTrajectory,      FeatureId::RatioEndToEndOverTrajectory,
        FeatureId::AverageVelocity,         FeatureId::MedianAccelFirst5,       FeatureId::ChangeOfFingerOrientation};
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_stroke(rng, 3 + rng() % 10);
        auto shifted = s;
        const double ddx = 37.25, ddy = -12.5;
        for (auto& p : shifted.points) {
            p.x += ddx;
            p.y += ddy;
        }
        const auto a = extract_features(s);
        const auto b = extract_features(shifted);
        for (auto id : invariant) EXPECT_NEAR(f(a, id), f(b, id), 1e-9 * (1.0 + std::abs(f(a, id))));
        EXPECT_EQ(f(b, FeatureId::StartX), s.points.front().x + ddx);
        EXPECT_EQ(f(b, FeatureId::StartY), s.points.front().y + ddy);
        EXPECT_EQ(f(b, FeatureId::StopX), s.points.back().x + ddx);
        EXPECT_EQ(f(b, FeatureId::StopY), s.points.back().y + ddy);
    }
}

TEST(ExtractFeatures, TimeShiftLeavesWithinStrokeFeatures) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_stroke(rng, 2 + rng() % 10);
        auto later = s;
        for (auto& p : later.points) p.time_ms += 123456;
        const auto a = extract_features(s);
        const auto b = extract_features(later);
        for (std::size_t i = 1; i < kFeatureCount; ++i) EXPECT_EQ(a[i], b[i]) << feature_name(static_cast<FeatureId>(i));
    }
}

TEST(ExtractDataset, EmptyInput) {
    const auto schema = default_schema();
    const auto r = extract_dataset(std::vector<Stroke>{}, schema);
    EXPECT_EQ(r.matrix.size(), 0u);
    EXPECT_EQ(r.matrix.dims(), kFeatureCount);
    EXPECT_TRUE(r.skipped.empty());
}

TEST(ExtractDataset, InterStrokeChainForOneUser) {
    const std::vector<Stroke> strokes = {make_stroke(1, {{0, 0, 0}, {40, 1, 1}}),
                                         make_stroke(1, {{100, 0, 0}, {130, 1, 1}})};
    const auto schema = default_schema();
    const auto r = extract_dataset(strokes, schema);
    ASSERT_EQ(r.matrix.size(), 2u);
    EXPECT_EQ(r.matrix.rows(0, 0), 0.0);
    EXPECT_EQ(r.matrix.rows(1, 0), 60.0);
    EXPECT_EQ(r.matrix.labels, (std::vector<std::int64_t>{1, 1}));
}

TEST(ExtractDataset, InterleavedUsersChainIndependently) {
    const std::vector<Stroke> strokes = {
        make_stroke(1, {{0, 0, 0}, {10, 1, 1}}),    make_stroke(2, {{5, 0, 0}, {20, 1, 1}}),
        make_stroke(1, {{30, 0, 0}, {40, 1, 1}}),   make_stroke(2, {{50, 0, 0}, {60, 1, 1}}),
        make_stroke(1, {{70, 0, 0}, {80, 1, 1}}, 2),  // other document: new chain
    };
    const auto schema = default_schema();
    const auto r = extract_dataset(strokes, schema);
    ASSERT_EQ(r.matrix.size(), 5u);
    EXPECT_EQ(r.matrix.rows(0, 0), 0.0);
    EXPECT_EQ(r.matrix.rows(1, 0), 0.0);
    EXPECT_EQ(r.matrix.rows(2, 0), 20.0);
    EXPECT_EQ(r.matrix.rows(3, 0), 30.0);
    EXPECT_EQ(r.matrix.rows(4, 0), 0.0);
}

TEST(ExtractDataset, SkipsDegenerateStrokesWithReason) {
    const std::vector<Stroke> strokes = {make_stroke(1, {{0, 0, 0}, {10, 1, 1}}), make_stroke(1, {{20, 0, 0}}),
                                         make_stroke(2, {{0, 0, 0}, {10, 1, 1}})};
    const auto schema = default_schema();
    const auto r = extract_dataset(strokes, schema);
    EXPECT_EQ(r.matrix.size(), 2u);
    ASSERT_EQ(r.skipped.size(), 1u);
    EXPECT_EQ(r.skipped[0].stroke_index, 1u);
    EXPECT_EQ(r.skipped[0].reason, SkipReason::DegenerateStroke);
}

TEST(ExtractDataset, SchemaSubsetSelectsColumns) {
    const std::vector<Stroke> strokes = {make_stroke(1, {{0, 0, 0}, {100, 3, 4}})};
    const std::vector<FeatureId> schema = {FeatureId::DirectEndToEndDistance, FeatureId::StrokeDuration};
    const auto r = extract_dataset(strokes, schema);
    EXPECT_EQ(r.matrix.schema, (std::vector<std::string>{"direct_end_to_end_distance", "stroke_duration"}));
    EXPECT_EQ(r.matrix.rows(0, 0), 5.0);
    EXPECT_EQ(r.matrix.rows(0, 1), 100.0);
}
