#include "touchauth/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "touchauth/error.hpp"
#include "touchauth/random.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth {

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "standardizer width differs from input");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            out(r, c) = stddev[c] > 0.0 ? (x(r, c) - mean[c]) / stddev[c] : 0.0;
        }
    }
    return out;
}

Standardized standardize(const Matrix& x) {
    if (x.rows() < 2) throw Error(ErrorCode::TooFewRows, "standardization needs at least two rows");
    const double n = static_cast<double>(x.rows());
    Standardizer s;
    s.mean.assign(x.cols(), 0.0);
    s.stddev.assign(x.cols(), 0.0);
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) sum += x(r, c);
        const double mu = sum / n;
        double ss = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - mu) * (x(r, c) - mu);
        s.mean[c] = mu;
        s.stddev[c] = std::sqrt(ss / n);
    }
    Matrix rows = s.transform(x);
    return {std::move(rows), std::move(s)};
}

namespace {

std::uint64_t row_key(const FeatureMatrix& m, std::size_t r, std::uint64_t seed) {
    std::uint64_t h = derive_seed(seed, static_cast<std::uint64_t>(m.labels[r]));
    for (double v : m.rows.row(r)) {
        if (v == 0.0) v = 0.0;  // -0 and +0 hash alike
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
    }
    return h;
}

/// Row indices per class (ascending label), each class ordered by hash key.
std::vector<std::vector<std::size_t>> shuffled_classes(const FeatureMatrix& m, std::uint64_t seed) {
    m.validate();
    std::map<std::int64_t, std::vector<std::pair<std::uint64_t, std::size_t>>> by_class;
    for (std::size_t r = 0; r < m.size(); ++r) by_class[m.labels[r]].emplace_back(row_key(m, r, seed), r);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(by_class.size());
    for (auto& [label, keyed] : by_class) {
        std::sort(keyed.begin(), keyed.end());
        auto& members = out.emplace_back();
        for (const auto& [_, r] : keyed) members.push_back(r);
    }
    return out;
}

}  // namespace

Split stratified_split(const FeatureMatrix& m, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "test fraction must lie strictly between 0 and 1");
    }
    Split split;
    for (const auto& members : shuffled_classes(m, seed)) {
        if (members.size() < 2) throw Error(ErrorCode::ClassTooSmall, "every class needs at least two rows");
        auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(members.size()) * test_fraction + 0.5));
        n_test = std::min(n_test, members.size() - 1);
        split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
        split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<Split> k_fold(const FeatureMatrix& m, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "k-fold needs k >= 2");
    std::vector<std::size_t> fold_of(m.size());
    std::size_t offset = 0;
    for (const auto& members : shuffled_classes(m, seed)) {
        if (members.size() < k) {
            throw Error(ErrorCode::ClassTooSmall, "every class needs at least " + std::to_string(k) + " rows");
        }
        // Continue the round-robin across classes so fold sizes differ by at most one.
        for (std::size_t i = 0; i < members.size(); ++i) fold_of[members[i]] = (offset + i) % k;
        offset += members.size();
    }
    std::vector<Split> folds(k);
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t f = 0; f < k; ++f) (f == fold_of[r] ? folds[f].test : folds[f].train).push_back(r);
    }
    return folds;
}

Matrix pearson_correlation_matrix(const Matrix& x) {
    if (x.rows() < 2) throw Error(ErrorCode::TooFewRows, "correlation needs at least two rows");
    const std::size_t d = x.cols();
    const double n = static_cast<double>(x.rows());
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c);
    }
    for (auto& m : mean) m /= n;

    Matrix cov(d, d);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            const double ci = x(r, i) - mean[i];
            for (std::size_t j = i; j < d; ++j) cov(i, j) += ci * (x(r, j) - mean[j]);
        }
    }
    Matrix corr(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        corr(i, i) = 1.0;
        for (std::size_t j = i + 1; j < d; ++j) {
            const double denom = std::sqrt(cov(i, i) * cov(j, j));
            const double r = denom > 0.0 ? std::clamp(cov(i, j) / denom, -1.0, 1.0) : 0.0;
            corr(i, j) = r;
            corr(j, i) = r;
        }
    }
    return corr;
}

std::string write_correlation_csv(const Matrix& corr, std::span<const std::string> names,
                                  std::string_view comment_block) {
    if (corr.rows() != names.size() || corr.cols() != names.size()) {
        throw Error(ErrorCode::DimensionMismatch, "correlation matrix and name list disagree");
    }
    std::string out(comment_block);
    out += "feature";
    for (const auto& n : names) {
        out += ',';
        out += n;
    }
    out += '\n';
    for (std::size_t i = 0; i < names.size(); ++i) {
        out += names[i];
        for (std::size_t j = 0; j < names.size(); ++j) {
            out += ',';
            out += text::format_double(corr(i, j));
        }
        out += '\n';
    }
    return out;
}

namespace {

struct SwipeStyle {
    double heading = 0.0;       // radians
    double speed = 1.0;         // px per ms
    double curvature = 0.0;     // total heading change over the stroke, radians
    double length = 300.0;      // px
    double pressure = 0.5;
    double area = 0.05;
    double finger_angle = 0.0;  // radians
    double finger_turn = 0.0;   // finger angle change over a stroke
    double start_x = 540.0;
    double start_y = 960.0;
    double gap_ms = 600.0;
    std::int64_t interval_ms = 12;
    std::int64_t phone_id = 1;
    Orientation orientation = Orientation::Portrait;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

std::vector<TouchEvent> generate_synthetic_users(const SyntheticOptions& options) {
    if (options.n_users < 2) throw Error(ErrorCode::InvalidArgument, "synthetic data needs at least two users");
    if (options.strokes_per_user < 1) throw Error(ErrorCode::InvalidArgument, "need at least one stroke per user");

    Rng style_rng(derive_seed(options.seed, 0));
    // Evenly spaced heading sectors, randomly assigned, keep users apart.
    std::vector<std::size_t> sector(options.n_users);
    for (std::size_t u = 0; u < options.n_users; ++u) sector[u] = u;
    shuffle(sector.begin(), sector.end(), style_rng);

    std::vector<SwipeStyle> styles(options.n_users);
    for (std::size_t u = 0; u < options.n_users; ++u) {
        auto& s = styles[u];
        const double width = 2.0 * std::numbers::pi / static_cast<double>(options.n_users);
        s.heading = width * static_cast<double>(sector[u]) + uniform(style_rng, -0.1, 0.1) * width;
        s.speed = std::exp(uniform(style_rng, std::log(0.3), std::log(3.0)));
        s.curvature = uniform(style_rng, -0.9, 0.9);
        s.length = uniform(style_rng, 150.0, 700.0);
        s.pressure = uniform(style_rng, 0.2, 0.8);
        s.area = uniform(style_rng, 0.02, 0.12);
        s.finger_angle = uniform(style_rng, -1.5, 1.5);
        s.finger_turn = uniform(style_rng, -0.4, 0.4);
        s.start_x = uniform(style_rng, 200.0, 880.0);
        s.start_y = uniform(style_rng, 300.0, 1620.0);
        s.gap_ms = uniform(style_rng, 300.0, 1500.0);
        s.interval_ms = 8 + static_cast<std::int64_t>(uniform_index(style_rng, 13));
        s.phone_id = 1 + static_cast<std::int64_t>(uniform_index(style_rng, 5));
        s.orientation = uniform01(style_rng) < 0.2 ? Orientation::Landscape : Orientation::Portrait;
    }

    std::vector<TouchEvent> events;
    for (std::size_t u = 0; u < options.n_users; ++u) {
        const auto& style = styles[u];
        Rng rng(derive_seed(options.seed, 1 + u));
        const auto user_id = static_cast<std::int64_t>(u + 1);
        std::int64_t t = 1000 + static_cast<std::int64_t>(uniform_index(rng, 5000));

        for (std::size_t k = 0; k < options.strokes_per_user; ++k) {
            const double heading = style.heading + 0.12 * standard_normal(rng);
            const double speed = style.speed * std::exp(0.12 * standard_normal(rng));
            const double length = style.length * std::exp(0.12 * standard_normal(rng));
            const double curvature = style.curvature + 0.1 * standard_normal(rng);
            const double pressure = style.pressure + 0.03 * standard_normal(rng);
            const double area = style.area * std::exp(0.1 * standard_normal(rng));
            const double angle = style.finger_angle + 0.05 * standard_normal(rng);
            const double turn = style.finger_turn + 0.05 * standard_normal(rng);

            const double duration = length / speed;
            const auto steps = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(std::llround(duration / static_cast<double>(style.interval_ms))));
            double x = style.start_x + 30.0 * standard_normal(rng);
            double y = style.start_y + 30.0 * standard_normal(rng);
            const double step_len = length / static_cast<double>(steps);

            TouchEvent e;
            e.user_id = user_id;
            e.phone_id = style.phone_id;
            e.doc_id = 1 + static_cast<std::int64_t>(k / 50);
            e.phone_orientation = style.orientation;
            for (std::int64_t i = 0; i <= steps; ++i) {
                const double progress = static_cast<double>(i) / static_cast<double>(steps);
                if (i > 0) {
                    const double theta = heading + curvature * (progress - 0.5);
                    const double jitter = 1.0 + 0.05 * standard_normal(rng);
                    x += step_len * jitter * std::cos(theta);
                    y += step_len * jitter * std::sin(theta);
                    t += std::max<std::int64_t>(
                        1, style.interval_ms + static_cast<std::int64_t>(uniform_index(rng, 5)) - 2);
                }
                e.time_ms = t;
                e.action = i == 0 ? Action::Down : (i == steps ? Action::Up : Action::Move);
                e.x = round_to(x, 0.01);
                e.y = round_to(y, 0.01);
                const double bump = std::sin(std::numbers::pi * progress);
                e.pressure = round_to(std::clamp(pressure * (0.8 + 0.3 * bump) + 0.01 * standard_normal(rng), 0.0, 1.0),
                                      0.0001);
                e.area = round_to(std::max(0.0, area * (0.85 + 0.25 * bump)), 0.0001);
                e.finger_orientation = round_to(angle + turn * progress, 0.0001);
                events.push_back(e);
            }
            t += static_cast<std::int64_t>(style.gap_ms * std::exp(0.3 * standard_normal(rng)));
        }
    }
    return events;
}

}  // namespace touchauth
