#pragma once

// Token-level helpers for the text model format.

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "touchauth/error.hpp"
#include "touchauth/matrix.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth::model_io {

inline void write_values(std::ostream& out, std::string_view key, std::span<const double> values) {
    out << key << ' ' << values.size();
    for (double v : values) out << ' ' << text::format_double(v);
    out << '\n';
}

inline void write_matrix(std::ostream& out, std::string_view key, const Matrix& m) {
    out << key << ' ' << m.rows() << ' ' << m.cols();
    for (double v : m.data()) out << ' ' << text::format_double(v);
    out << '\n';
}

template <class T>
void write_scalar(std::ostream& out, std::string_view key, const T& value) {
    if constexpr (std::is_floating_point_v<T>) {
        out << key << ' ' << text::format_double(static_cast<double>(value)) << '\n';
    } else {
        out << key << ' ' << value << '\n';
    }
}

inline std::string next_token(std::istream& in) {
    std::string token;
    if (!(in >> token)) throw Error(ErrorCode::BadValue, "model stream ended early");
    return token;
}

inline void expect(std::istream& in, std::string_view key) {
    const auto token = next_token(in);
    if (token != key) {
        throw Error(ErrorCode::BadValue, "model stream: expected '" + std::string(key) + "', found '" + token + "'");
    }
}

inline double read_double(std::istream& in) {
    const auto token = next_token(in);
    auto v = text::parse_double(token);
    if (!v) throw Error(ErrorCode::BadValue, "model stream: bad number '" + token + "'");
    return *v;
}

inline std::int64_t read_int(std::istream& in) {
    const auto token = next_token(in);
    auto v = text::parse_int(token);
    if (!v) throw Error(ErrorCode::BadValue, "model stream: bad integer '" + token + "'");
    return *v;
}

inline std::size_t read_size(std::istream& in) {
    const auto v = read_int(in);
    if (v < 0) throw Error(ErrorCode::BadValue, "model stream: negative size");
    return static_cast<std::size_t>(v);
}

template <class T>
T read_scalar(std::istream& in, std::string_view key) {
    expect(in, key);
    if constexpr (std::is_floating_point_v<T>) {
        return static_cast<T>(read_double(in));
    } else {
        return static_cast<T>(read_int(in));
    }
}

inline std::vector<double> read_values(std::istream& in, std::string_view key) {
    expect(in, key);
    const auto n = read_size(in);
    std::vector<double> v(n);
    for (auto& x : v) x = read_double(in);
    return v;
}

inline Matrix read_matrix(std::istream& in, std::string_view key) {
    expect(in, key);
    const auto r = read_size(in);
    const auto c = read_size(in);
    std::vector<double> v(r * c);
    for (auto& x : v) x = read_double(in);
    return Matrix(r, c, std::move(v));
}

}  // namespace touchauth::model_io
