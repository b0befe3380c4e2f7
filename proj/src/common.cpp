#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

#include "touchauth/error.hpp"
#include "touchauth/matrix.hpp"
#include "touchauth/random.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::BadValue: return "BadValue";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::DegenerateStroke: return "DegenerateStroke";
        case ErrorCode::EmptySamples: return "EmptySamples";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::ClassTooSmall: return "ClassTooSmall";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SingularCovariance: return "SingularCovariance";
        case ErrorCode::DegenerateClass: return "DegenerateClass";
        case ErrorCode::EmptyNode: return "EmptyNode";
        case ErrorCode::EmptyScores: return "EmptyScores";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out;
    out.cols_ = cols_;
    out.rows_ = indices.size();
    out.data_.reserve(indices.size() * cols_);
    for (std::size_t r : indices) {
        if (r >= rows_) throw Error(ErrorCode::DimensionMismatch, "row index out of range");
        auto src = row(r);
        out.data_.insert(out.data_.end(), src.begin(), src.end());
    }
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> indices) const {
    for (std::size_t c : indices) {
        if (c >= cols_) throw Error(ErrorCode::DimensionMismatch, "column index out of range");
    }
    Matrix out(rows_, indices.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t j = 0; j < indices.size(); ++j) out(r, j) = (*this)(r, indices[j]);
    }
    return out;
}

double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace touchauth

namespace touchauth::text {

std::string format_double(double value) {
    if (value == 0.0) return "0";  // folds -0 into 0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw Error(ErrorCode::BadValue, "cannot format number");
    return std::string(buf, ptr);
}

std::string format_float(float value) {
    if (value == 0.0f) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw Error(ErrorCode::BadValue, "cannot format number");
    return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
    return value;
}

std::optional<std::int64_t> parse_int(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return std::nullopt;
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
    return value;
}

std::string_view trim(std::string_view s) noexcept {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error(ErrorCode::Io, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::Io, "cannot rename onto '" + path.string() + "'");
    }
}

}  // namespace touchauth::text
