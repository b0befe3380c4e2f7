#include "touchauth/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "touchauth/error.hpp"

namespace touchauth {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    "inter_stroke_time",
    "stroke_duration",
    "start_x",
    "start_y",
    "stop_x",
    "stop_y",
    "direct_end_to_end_distance",
    "mean_resultant_length",
    "up_down_left_right_flag",
    "direction_of_end_to_end",
    "phone_id",
    "pairwise_velocity_p20",
    "pairwise_velocity_p50",
    "pairwise_velocity_p80",
    "pairwise_acceleration_p20",
    "pairwise_acceleration_p50",
    "pairwise_acceleration_p80",
    "median_velocity_last_3",
    "largest_deviation_from_line",
    "deviation_p20",
    "deviation_p50",
    "deviation_p80",
    "line_average_direction",
    "length_of_trajectory",
    "ratio_end_to_end_over_trajectory",
    "average_velocity",
    "median_accel_first_5",
    "midstroke_pressure",
    "midstroke_area",
    "midstroke_finger_orientation",
    "change_of_finger_orientation",
    "phone_orientation",
};

std::size_t idx(FeatureId id) { return static_cast<std::size_t>(id); }

SwipeDirection dominant_direction(double dx, double dy) {
    if (std::abs(dy) > std::abs(dx)) return dy < 0.0 ? SwipeDirection::Up : SwipeDirection::Down;
    return dx > 0.0 ? SwipeDirection::Right : SwipeDirection::Left;
}

}  // namespace

std::string_view feature_name(FeatureId id) noexcept { return kNames[idx(id)]; }

std::optional<FeatureId> feature_from_name(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return static_cast<FeatureId>(i);
    }
    return std::nullopt;
}

std::vector<FeatureId> default_schema() {
    std::vector<FeatureId> schema(kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i) schema[i] = static_cast<FeatureId>(i);
    return schema;
}

double percentile(std::span<const double> samples, double q) {
    if (samples.empty()) throw Error(ErrorCode::EmptySamples, "percentile of no samples");
    if (!(q >= 0.0 && q <= 100.0)) throw Error(ErrorCode::InvalidArgument, "percentile rank outside [0, 100]");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double median(std::span<const double> samples) { return percentile(samples, 50.0); }

std::array<double, kFeatureCount> extract_features(const Stroke& stroke, const Stroke* previous) {
    const auto& p = stroke.points;
    const std::size_t n = p.size();
    if (n < 2) throw Error(ErrorCode::DegenerateStroke, "stroke has fewer than two points");
    const auto& first = p.front();
    const auto& last = p.back();
    const double duration = static_cast<double>(last.time_ms - first.time_ms);
    if (duration <= 0.0) throw Error(ErrorCode::DegenerateStroke, "stroke spans zero time");

    std::array<double, kFeatureCount> f{};
    auto set = [&f](FeatureId id, double v) { f[idx(id)] = v; };

    set(FeatureId::InterStrokeTime,
        previous ? static_cast<double>(first.time_ms - previous->points.back().time_ms) : 0.0);
    set(FeatureId::StrokeDuration, duration);
    set(FeatureId::StartX, first.x);
    set(FeatureId::StartY, first.y);
    set(FeatureId::StopX, last.x);
    set(FeatureId::StopY, last.y);

    const double dx = last.x - first.x;
    const double dy = last.y - first.y;
    const double end_to_end = std::hypot(dx, dy);
    set(FeatureId::DirectEndToEndDistance, end_to_end);
    set(FeatureId::UpDownLeftRightFlag, static_cast<double>(dominant_direction(dx, dy)));
    set(FeatureId::DirectionOfEndToEnd, std::atan2(dy, dx));
    set(FeatureId::PhoneId, static_cast<double>(stroke.phone_id));

    // Segment quantities.
    std::vector<double> velocity(n - 1);
    double trajectory = 0.0;
    double sum_cos = 0.0;
    double sum_sin = 0.0;
    std::size_t headed = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double sx = p[i + 1].x - p[i].x;
        const double sy = p[i + 1].y - p[i].y;
        const double len = std::hypot(sx, sy);
        const double dt = static_cast<double>(p[i + 1].time_ms - p[i].time_ms);
        velocity[i] = len / dt;
        trajectory += len;
        if (len > 0.0) {
            sum_cos += sx / len;
            sum_sin += sy / len;
            ++headed;
        }
    }
    // Zero-length segments carry no heading and are left out of both circular statistics.
    set(FeatureId::MeanResultantLength,
        headed ? std::min(1.0, std::hypot(sum_cos, sum_sin) / static_cast<double>(headed)) : 0.0);
    set(FeatureId::LineAverageDirection, headed ? std::atan2(sum_sin, sum_cos) : 0.0);

    std::vector<double> accel;
    if (n >= 3) {
        accel.resize(n - 2);
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const double span = static_cast<double>(p[i + 2].time_ms - p[i].time_ms);
            accel[i] = (velocity[i + 1] - velocity[i]) / span * 2.0;
        }
    }

    set(FeatureId::PairwiseVelocityP20, percentile(velocity, 20.0));
    set(FeatureId::PairwiseVelocityP50, percentile(velocity, 50.0));
    set(FeatureId::PairwiseVelocityP80, percentile(velocity, 80.0));
    if (!accel.empty()) {
        set(FeatureId::PairwiseAccelerationP20, percentile(accel, 20.0));
        set(FeatureId::PairwiseAccelerationP50, percentile(accel, 50.0));
        set(FeatureId::PairwiseAccelerationP80, percentile(accel, 80.0));
        const std::size_t head = std::min<std::size_t>(5, accel.size());
        set(FeatureId::MedianAccelFirst5, median(std::span<const double>(accel).first(head)));
    }
    {
        const std::size_t tail = std::min<std::size_t>(3, velocity.size());
        set(FeatureId::MedianVelocityLast3, median(std::span<const double>(velocity).last(tail)));
    }

    // Signed perpendicular distance of every point to the chord first->last.
    std::vector<double> deviation(n, 0.0);
    if (end_to_end > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double cross = dx * (p[i].y - first.y) - dy * (p[i].x - first.x);
            deviation[i] = cross / end_to_end;
        }
    }
    double largest = 0.0;
    for (double d : deviation) largest = std::max(largest, std::abs(d));
    set(FeatureId::LargestDeviationFromLine, largest);
    set(FeatureId::DeviationP20, percentile(deviation, 20.0));
    set(FeatureId::DeviationP50, percentile(deviation, 50.0));
    set(FeatureId::DeviationP80, percentile(deviation, 80.0));

    set(FeatureId::LengthOfTrajectory, trajectory);
    set(FeatureId::RatioEndToEndOverTrajectory, trajectory > 0.0 ? end_to_end / trajectory : 1.0);
    set(FeatureId::AverageVelocity, trajectory / duration);

    const auto& mid = p[(n + 1) / 2 - 1];
    set(FeatureId::MidstrokePressure, mid.pressure);
    set(FeatureId::MidstrokeArea, mid.area);
    set(FeatureId::MidstrokeFingerOrientation, mid.finger_orientation);
    set(FeatureId::ChangeOfFingerOrientation, last.finger_orientation - first.finger_orientation);
    set(FeatureId::PhoneOrientation, static_cast<double>(stroke.phone_orientation));
    return f;
}

ExtractionResult extract_dataset(std::span<const Stroke> strokes, std::span<const FeatureId> schema) {
    ExtractionResult result;
    auto& m = result.matrix;
    for (FeatureId id : schema) m.schema.emplace_back(feature_name(id));
    m.rows = Matrix(0, schema.size());

    std::map<SessionKey, const Stroke*> last_in_session;
    std::vector<double> row(schema.size());
    for (std::size_t s = 0; s < strokes.size(); ++s) {
        const auto& stroke = strokes[s];
        const auto key = session_of(stroke);
        auto it = last_in_session.find(key);
        const Stroke* previous = it == last_in_session.end() ? nullptr : it->second;

        std::array<double, kFeatureCount> values;
        try {
            values = extract_features(stroke, previous);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateStroke) throw;
            result.skipped.push_back({s, SkipReason::DegenerateStroke});
            continue;
        }
        last_in_session[key] = &stroke;

        bool finite = true;
        for (std::size_t j = 0; j < schema.size(); ++j) {
            row[j] = values[idx(schema[j])];
            finite = finite && std::isfinite(row[j]);
        }
        if (!finite) {
            result.skipped.push_back({s, SkipReason::NonFinite});
            continue;
        }
        m.rows.append_row(row);
        m.labels.push_back(stroke.user_id);
    }
    return result;
}

}  // namespace touchauth
