#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "touchauth/matrix.hpp"

namespace touchauth {

/// Labeled feature table: one row per stroke, one named column per feature.
struct FeatureMatrix {
    std::vector<std::string> schema;
    Matrix rows;
    std::vector<std::int64_t> labels;

    std::size_t size() const noexcept { return rows.rows(); }
    std::size_t dims() const noexcept { return schema.size(); }

    /// Throws DimensionMismatch if rows, labels and schema disagree.
    void validate() const;

    FeatureMatrix select_rows(std::span<const std::size_t> indices) const;
    FeatureMatrix select_columns(std::span<const std::size_t> indices) const;

    /// Sorted distinct labels.
    std::vector<std::int64_t> classes() const;

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

/// CSV with a header of feature names plus a trailing `user_id` column.
/// Leading lines starting with '#' are comments (used for embedded run config).
FeatureMatrix read_feature_csv(std::string_view source);
std::string write_feature_csv(const FeatureMatrix& m, std::string_view comment_block = {});

}  // namespace touchauth
