#include "touchauth/ingest.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <sstream>

#include "touchauth/error.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth {

namespace {

constexpr std::size_t kColumnCount = std::size(kRawColumns);

Action parse_action(std::string_view field, std::size_t line) {
    if (field == "0" || field == "down") return Action::Down;
    if (field == "1" || field == "up") return Action::Up;
    if (field == "2" || field == "move") return Action::Move;
    throw Error(ErrorCode::BadValue,
                "line " + std::to_string(line) + ": unknown action '" + std::string(field) + "'");
}

Orientation parse_orientation(std::string_view field, std::size_t line) {
    if (field == "0" || field == "portrait") return Orientation::Portrait;
    if (field == "1" || field == "landscape") return Orientation::Landscape;
    throw Error(ErrorCode::BadValue,
                "line " + std::to_string(line) + ": unknown phone_orientation '" + std::string(field) + "'");
}

[[noreturn]] void bad_field(std::size_t line, std::string_view column, std::string_view field) {
    throw Error(ErrorCode::BadValue, "line " + std::to_string(line) + ": column '" + std::string(column) +
                                         "' has non-numeric value '" + std::string(field) + "'");
}

}  // namespace

std::vector<TouchEvent> parse_raw_events(std::string_view source) {
    std::vector<TouchEvent> events;
    std::array<std::size_t, kColumnCount> position{};
    std::size_t header_width = 0;
    bool have_header = false;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        auto end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        const auto line = text::trim(source.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        const auto fields = text::split_fields(line);
        if (!have_header) {
            for (std::size_t c = 0; c < kColumnCount; ++c) {
                auto it = std::find(fields.begin(), fields.end(), kRawColumns[c]);
                if (it == fields.end()) {
                    throw Error(ErrorCode::MissingColumn, "header lacks column '" + std::string(kRawColumns[c]) + "'");
                }
                position[c] = static_cast<std::size_t>(it - fields.begin());
            }
            header_width = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != header_width) {
            throw Error(ErrorCode::BadValue, "line " + std::to_string(line_no) + ": expected " +
                                                 std::to_string(header_width) + " fields, got " +
                                                 std::to_string(fields.size()));
        }

        auto integer = [&](std::size_t c) {
            auto v = text::parse_int(fields[position[c]]);
            if (!v) bad_field(line_no, kRawColumns[c], fields[position[c]]);
            return *v;
        };
        auto real = [&](std::size_t c) {
            auto v = text::parse_double(fields[position[c]]);
            if (!v) bad_field(line_no, kRawColumns[c], fields[position[c]]);
            return *v;
        };

        TouchEvent e;
        e.user_id = integer(0);
        e.phone_id = integer(1);
        e.doc_id = integer(2);
        e.time_ms = integer(3);
        if (e.time_ms < 0) {
            throw Error(ErrorCode::BadValue, "line " + std::to_string(line_no) + ": negative time_ms");
        }
        e.action = parse_action(fields[position[4]], line_no);
        e.phone_orientation = parse_orientation(fields[position[5]], line_no);
        e.x = real(6);
        e.y = real(7);
        e.pressure = real(8);
        e.area = real(9);
        e.finger_orientation = real(10);
        events.push_back(e);
    }
    if (!have_header) throw Error(ErrorCode::EmptyInput, "no header row");
    return events;
}

std::string write_raw_events(const std::vector<TouchEvent>& events) {
    std::string out;
    for (std::size_t c = 0; c < kColumnCount; ++c) {
        if (c) out += ',';
        out += kRawColumns[c];
    }
    out += '\n';
    for (const auto& e : events) {
        out += std::to_string(e.user_id);
        out += ',';
        out += std::to_string(e.phone_id);
        out += ',';
        out += std::to_string(e.doc_id);
        out += ',';
        out += std::to_string(e.time_ms);
        out += ',';
        out += std::to_string(static_cast<int>(e.action));
        out += ',';
        out += std::to_string(static_cast<int>(e.phone_orientation));
        for (double v : {e.x, e.y, e.pressure, e.area, e.finger_orientation}) {
            out += ',';
            out += text::format_double(v);
        }
        out += '\n';
    }
    return out;
}

namespace {

struct PendingStroke {
    std::size_t first_index = 0;  // source index of the Down event
    std::size_t events = 0;
    std::size_t duplicates = 0;
    Stroke stroke;
};

StrokePoint point_of(const TouchEvent& e) {
    return {e.time_ms, e.x, e.y, e.pressure, e.area, e.finger_orientation};
}

}  // namespace

Segmentation segment_strokes(const std::vector<TouchEvent>& events) {
    Segmentation result;
    auto& report = result.report;
    report.events_total = events.size();

    std::map<SessionKey, std::vector<std::size_t>> sessions;
    for (std::size_t i = 0; i < events.size(); ++i) sessions[session_of(events[i])].push_back(i);

    std::vector<std::pair<std::size_t, Stroke>> emitted;
    for (auto& [key, indices] : sessions) {
        std::stable_sort(indices.begin(), indices.end(),
                         [&](std::size_t a, std::size_t b) { return events[a].time_ms < events[b].time_ms; });
        auto& counts = report.per_session[key];
        std::optional<PendingStroke> open;

        auto drop_open_as_orphans = [&] {
            if (!open) return;
            report.orphan_events += open->events;
            counts.orphan_events += open->events;
            open.reset();
        };

        for (std::size_t idx : indices) {
            const auto& e = events[idx];
            switch (e.action) {
                case Action::Down: {
                    drop_open_as_orphans();
                    open.emplace();
                    open->first_index = idx;
                    open->events = 1;
                    open->stroke.user_id = e.user_id;
                    open->stroke.phone_id = e.phone_id;
                    open->stroke.doc_id = e.doc_id;
                    open->stroke.phone_orientation = e.phone_orientation;
                    open->stroke.points.push_back(point_of(e));
                    break;
                }
                case Action::Move:
                case Action::Up: {
                    if (!open) {
                        ++report.orphan_events;
                        ++counts.orphan_events;
                        break;
                    }
                    ++open->events;
                    auto& pts = open->stroke.points;
                    if (pts.back().time_ms == e.time_ms) {
                        pts.back() = point_of(e);
                        ++open->duplicates;
                    } else {
                        pts.push_back(point_of(e));
                    }
                    if (e.action == Action::Up) {
                        if (pts.size() >= 2) {
                            report.events_consumed += open->events;
                            report.duplicate_timestamps += open->duplicates;
                            ++counts.strokes;
                            emitted.emplace_back(open->first_index, std::move(open->stroke));
                        } else {
                            report.degenerate_events += open->events;
                            ++counts.degenerate_strokes;
                        }
                        open.reset();
                    }
                    break;
                }
            }
        }
        drop_open_as_orphans();
    }

    std::sort(emitted.begin(), emitted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    result.strokes.reserve(emitted.size());
    for (auto& [_, s] : emitted) result.strokes.push_back(std::move(s));
    report.events_dropped = report.orphan_events + report.degenerate_events;
    return result;
}

std::string SegmentationReport::to_text() const {
    std::ostringstream os;
    std::size_t strokes = 0;
    for (const auto& [_, c] : per_session) strokes += c.strokes;
    os << "segmentation: " << strokes << " strokes from " << events_total << " events\n"
       << "  consumed " << events_consumed << ", dropped " << events_dropped << " (orphans " << orphan_events
       << ", degenerate " << degenerate_events << "), duplicate timestamps merged " << duplicate_timestamps
       << '\n';
    os << "  user_id,doc_id,phone_id,strokes,orphans,degenerate\n";
    for (const auto& [key, c] : per_session) {
        const auto& [user, doc, phone] = key;
        os << "  " << user << ',' << doc << ',' << phone << ',' << c.strokes << ',' << c.orphan_events << ','
           << c.degenerate_strokes << '\n';
    }
    return os.str();
}

}  // namespace touchauth
