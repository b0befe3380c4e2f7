#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "touchauth/feature_matrix.hpp"
#include "touchauth/ingest.hpp"

namespace touchauth {

/// Per-column affine map fitted by standardize(). Columns with zero spread
/// map to 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // population convention; 0 for constant columns

    Matrix transform(const Matrix& x) const;
};

struct Standardized {
    Matrix rows;
    Standardizer transform;
};

/// Throws TooFewRows when fewer than two rows are given.
Standardized standardize(const Matrix& x);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    friend bool operator==(const Split&, const Split&) = default;
};

/// Per-class holdout. Each class contributes floor(size * test_fraction + 0.5)
/// test rows, capped at size - 1 so every class stays in train.
///
/// Row order inside a class is decided by a seeded hash of the row's label and
/// values, not by its position, so permuting the input rows permutes the
/// membership the same way. Index lists are returned sorted.
Split stratified_split(const FeatureMatrix& m, double test_fraction, std::uint64_t seed);

/// k stratified folds; every row is in exactly one test set.
std::vector<Split> k_fold(const FeatureMatrix& m, std::size_t k, std::uint64_t seed);

/// Pearson correlation between columns. Zero-variance columns get 0 off the
/// diagonal; the diagonal is always 1.
Matrix pearson_correlation_matrix(const Matrix& x);

std::string write_correlation_csv(const Matrix& corr, std::span<const std::string> names,
                                  std::string_view comment_block = {});

struct SyntheticOptions {
    std::size_t n_users = 5;
    std::size_t strokes_per_user = 100;
    std::uint64_t seed = 42;
};

/// Raw events for users with distinct latent swipe styles. Each user's style
/// (heading sector, speed, curvature, stroke length, pressure, contact area,
/// finger angle, sampling rate) is drawn from the seeded generator; strokes
/// add per-stroke jitter around it.
std::vector<TouchEvent> generate_synthetic_users(const SyntheticOptions& options);

}  // namespace touchauth
