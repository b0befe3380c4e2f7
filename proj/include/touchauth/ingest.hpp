#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace touchauth {

enum class Action : std::uint8_t { Down = 0, Up = 1, Move = 2 };
enum class Orientation : std::uint8_t { Portrait = 0, Landscape = 1 };

/// One raw touchscreen sample.
struct TouchEvent {
    std::int64_t user_id = 0;
    std::int64_t phone_id = 0;
    std::int64_t doc_id = 0;
    std::int64_t time_ms = 0;
    Action action = Action::Move;
    Orientation phone_orientation = Orientation::Portrait;
    double x = 0.0;
    double y = 0.0;
    double pressure = 0.0;
    double area = 0.0;
    double finger_orientation = 0.0;

    friend bool operator==(const TouchEvent&, const TouchEvent&) = default;
};

struct StrokePoint {
    std::int64_t time_ms = 0;
    double x = 0.0;
    double y = 0.0;
    double pressure = 0.0;
    double area = 0.0;
    double finger_orientation = 0.0;

    friend bool operator==(const StrokePoint&, const StrokePoint&) = default;
};

/// A Down, Move*, Up span of one finger. Points have strictly increasing
/// timestamps and there are at least two of them.
struct Stroke {
    std::int64_t user_id = 0;
    std::int64_t phone_id = 0;
    std::int64_t doc_id = 0;
    Orientation phone_orientation = Orientation::Portrait;
    std::vector<StrokePoint> points;

    friend bool operator==(const Stroke&, const Stroke&) = default;
};

/// (user_id, doc_id, phone_id): one recording session.
using SessionKey = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

inline SessionKey session_of(const TouchEvent& e) { return {e.user_id, e.doc_id, e.phone_id}; }
inline SessionKey session_of(const Stroke& s) { return {s.user_id, s.doc_id, s.phone_id}; }

struct SessionCounts {
    std::size_t strokes = 0;
    std::size_t orphan_events = 0;
    std::size_t degenerate_strokes = 0;

    friend bool operator==(const SessionCounts&, const SessionCounts&) = default;
};

/// Outcome of segmentation. Every input event is either consumed into an
/// emitted stroke or dropped: events_consumed + events_dropped == events_total.
struct SegmentationReport {
    std::size_t events_total = 0;
    std::size_t events_consumed = 0;
    std::size_t events_dropped = 0;
    std::size_t orphan_events = 0;       // Up/Move outside a stroke, unterminated Down spans
    std::size_t degenerate_events = 0;   // events of strokes with < 2 distinct timestamps
    std::size_t duplicate_timestamps = 0;  // merged inside emitted strokes
    std::map<SessionKey, SessionCounts> per_session;

    std::string to_text() const;

    friend bool operator==(const SegmentationReport&, const SegmentationReport&) = default;
};

struct Segmentation {
    std::vector<Stroke> strokes;
    SegmentationReport report;
};

/// Column names of the raw event table, in the order they are written.
inline constexpr std::string_view kRawColumns[] = {
    "user_id", "phone_id", "doc_id", "time_ms", "action", "phone_orientation",
    "x", "y", "pressure", "area", "finger_orientation"};

/// Parses a raw event table. Columns are matched by header name, so any
/// column order is accepted. Actions may be 0/1/2 or down/up/move.
/// Lines starting with '#' are comments.
std::vector<TouchEvent> parse_raw_events(std::string_view source);

std::string write_raw_events(const std::vector<TouchEvent>& events);

/// Splits events into strokes per session. Sessions are processed
/// independently and strokes are returned in the file order of their Down event.
Segmentation segment_strokes(const std::vector<TouchEvent>& events);

}  // namespace touchauth
