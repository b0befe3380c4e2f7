#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "model_io.hpp"
#include "touchauth/models.hpp"

namespace touchauth {

std::unique_ptr<KNearestNeighbors> KNearestNeighbors::fit(const KnnParams& p, const Matrix& x, const EncodedLabels& y) {
    if (p.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    auto model = std::unique_ptr<KNearestNeighbors>(new KNearestNeighbors());
    model->k_ = p.k;
    model->train_ = x;
    model->target_ = y.index;
    return model;
}

KNearestNeighbors::Votes KNearestNeighbors::votes(std::span<const double> row) const {
    const std::size_t n = train_.rows();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = train_.row(i);
        double d2 = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) d2 += (row[j] - t[j]) * (row[j] - t[j]);
        dist[i] = {d2, i};
    }
    const std::size_t k = std::min(k_, n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    Votes v{std::vector<double>(classes_.size(), 0.0), std::vector<double>(classes_.size(), 0.0)};
    for (std::size_t i = 0; i < k; ++i) {
        const auto cls = target_[dist[i].second];
        v.count[cls] += 1.0;
        const double d = std::sqrt(dist[i].first);
        v.inverse_distance[cls] += d > 0.0 ? 1.0 / d : std::numeric_limits<double>::infinity();
    }
    return v;
}

std::vector<std::size_t> KNearestNeighbors::predict_indices(const Matrix& x) const {
    std::vector<std::size_t> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto v = votes(x.row(r));
        std::size_t best = 0;
        for (std::size_t c = 1; c < v.count.size(); ++c) {
            if (v.count[c] > v.count[best] ||
                (v.count[c] == v.count[best] && v.inverse_distance[c] > v.inverse_distance[best])) {
                best = c;
            }
        }
        out[r] = best;
    }
    return out;
}

Matrix KNearestNeighbors::proba_impl(const Matrix& x) const {
    Matrix p(x.rows(), classes_.size());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto v = votes(x.row(r));
        double total = 0.0;
        for (double c : v.count) total += c;
        for (std::size_t c = 0; c < v.count.size(); ++c) p(r, c) = v.count[c] / total;
    }
    return p;
}

void KNearestNeighbors::save_state(std::ostream& out) const {
    out << "k " << k_ << '\n';
    model_io::write_matrix(out, "train", train_);
    out << "targets " << target_.size();
    for (auto t : target_) out << ' ' << t;
    out << '\n';
}

std::unique_ptr<KNearestNeighbors> KNearestNeighbors::load_state(std::istream& in) {
    auto model = std::unique_ptr<KNearestNeighbors>(new KNearestNeighbors());
    model->k_ = model_io::read_scalar<std::size_t>(in, "k");
    model->train_ = model_io::read_matrix(in, "train");
    model_io::expect(in, "targets");
    model->target_.resize(model_io::read_size(in));
    for (auto& t : model->target_) t = model_io::read_size(in);
    return model;
}

}  // namespace touchauth
