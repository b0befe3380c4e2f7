#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "touchauth/feature_matrix.hpp"
#include "touchauth/ingest.hpp"

namespace touchauth {

/// Canonical per-stroke features. The enumerator value is the column index
/// in the default schema.
enum class FeatureId : std::uint8_t {
    InterStrokeTime,
    StrokeDuration,
    StartX,
    StartY,
    StopX,
    StopY,
    DirectEndToEndDistance,
    MeanResultantLength,
    UpDownLeftRightFlag,
    DirectionOfEndToEnd,
    PhoneId,
    PairwiseVelocityP20,
    PairwiseVelocityP50,
    PairwiseVelocityP80,
    PairwiseAccelerationP20,
    PairwiseAccelerationP50,
    PairwiseAccelerationP80,
    MedianVelocityLast3,
    LargestDeviationFromLine,
    DeviationP20,
    DeviationP50,
    DeviationP80,
    LineAverageDirection,
    LengthOfTrajectory,
    RatioEndToEndOverTrajectory,
    AverageVelocity,
    MedianAccelFirst5,
    MidstrokePressure,
    MidstrokeArea,
    MidstrokeFingerOrientation,
    ChangeOfFingerOrientation,
    PhoneOrientation,
};

inline constexpr std::size_t kFeatureCount = 32;

std::string_view feature_name(FeatureId id) noexcept;
std::optional<FeatureId> feature_from_name(std::string_view name) noexcept;

/// All canonical features in column order.
std::vector<FeatureId> default_schema();

/// Dominant-axis direction of the end-to-end displacement. Screen
/// coordinates: y grows downward, so negative dy is "up".
enum class SwipeDirection : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

/// Linear-interpolation percentile: rank q/100*(m-1) on the sorted samples.
/// Throws EmptySamples.
double percentile(std::span<const double> samples, double q);

/// Median with the same interpolation convention as percentile(., 50).
double median(std::span<const double> samples);

/// Full canonical feature vector (kFeatureCount entries, default order).
/// `previous` is the preceding stroke of the same session, if any.
/// Throws DegenerateStroke when the stroke spans zero time.
std::array<double, kFeatureCount> extract_features(const Stroke& stroke, const Stroke* previous = nullptr);

enum class SkipReason : std::uint8_t { DegenerateStroke, NonFinite };

struct SkippedStroke {
    std::size_t stroke_index = 0;
    SkipReason reason = SkipReason::DegenerateStroke;
};

struct ExtractionResult {
    FeatureMatrix matrix;
    std::vector<SkippedStroke> skipped;
};

/// One row per accepted stroke, columns restricted to `schema`.
/// Inter-stroke time chains run per (user, doc, phone) session in input order.
ExtractionResult extract_dataset(std::span<const Stroke> strokes, std::span<const FeatureId> schema);

}  // namespace touchauth
