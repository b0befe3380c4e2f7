#include "touchauth/feature_matrix.hpp"

#include <algorithm>
#include <set>

#include "touchauth/error.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth {

void FeatureMatrix::validate() const {
    if (rows.cols() != schema.size() && !(rows.rows() == 0 && rows.cols() == 0)) {
        throw Error(ErrorCode::DimensionMismatch, "row width differs from schema length");
    }
    if (labels.size() != rows.rows()) throw Error(ErrorCode::DimensionMismatch, "label count differs from row count");
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
    FeatureMatrix out;
    out.schema = schema;
    out.rows = rows.select_rows(indices);
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) out.labels.push_back(labels[i]);
    return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> indices) const {
    FeatureMatrix out;
    for (std::size_t c : indices) {
        if (c >= schema.size()) throw Error(ErrorCode::DimensionMismatch, "column index out of range");
        out.schema.push_back(schema[c]);
    }
    out.rows = rows.select_cols(indices);
    out.labels = labels;
    return out;
}

std::vector<std::int64_t> FeatureMatrix::classes() const {
    std::set<std::int64_t> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
}

FeatureMatrix read_feature_csv(std::string_view source) {
    FeatureMatrix m;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    std::vector<double> row;
    while (start <= source.size()) {
        auto end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        const auto line = text::trim(source.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = text::split_fields(line);
        if (!have_header) {
            if (fields.size() < 2 || fields.back() != "user_id") {
                throw Error(ErrorCode::MissingColumn, "feature table header must end with 'user_id'");
            }
            for (std::size_t i = 0; i + 1 < fields.size(); ++i) m.schema.emplace_back(fields[i]);
            m.rows = Matrix(0, m.schema.size());
            row.resize(m.schema.size());
            have_header = true;
            continue;
        }
        if (fields.size() != m.schema.size() + 1) {
            throw Error(ErrorCode::BadValue, "line " + std::to_string(line_no) + ": expected " +
                                                 std::to_string(m.schema.size() + 1) + " fields");
        }
        for (std::size_t j = 0; j < m.schema.size(); ++j) {
            auto v = text::parse_double(fields[j]);
            if (!v) {
                throw Error(ErrorCode::BadValue, "line " + std::to_string(line_no) + ": column '" + m.schema[j] +
                                                     "' has non-numeric value '" + std::string(fields[j]) + "'");
            }
            row[j] = *v;
        }
        auto label = text::parse_int(fields.back());
        if (!label) {
            throw Error(ErrorCode::BadValue, "line " + std::to_string(line_no) + ": user_id is not an integer");
        }
        m.rows.append_row(row);
        m.labels.push_back(*label);
    }
    if (!have_header) throw Error(ErrorCode::EmptyInput, "no header row");
    return m;
}

std::string write_feature_csv(const FeatureMatrix& m, std::string_view comment_block) {
    m.validate();
    std::string out(comment_block);
    for (const auto& name : m.schema) {
        out += name;
        out += ',';
    }
    out += "user_id\n";
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (double v : m.rows.row(r)) {
            out += text::format_double(v);
            out += ',';
        }
        out += std::to_string(m.labels[r]);
        out += '\n';
    }
    return out;
}

}  // namespace touchauth
