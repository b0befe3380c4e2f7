#include <Eigen/Dense>

#include <cmath>
#include <istream>
#include <ostream>

#include "model_io.hpp"
#include "touchauth/models.hpp"

namespace touchauth {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    }
    return out;
}

/// LDLT factorisation with a relative pivot test; throws SingularCovariance.
Eigen::LDLT<Eigen::MatrixXd> factor(const Matrix& covariance) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(to_eigen(covariance));
    const auto d = ldlt.vectorD();
    const double largest = d.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(largest > 0.0) || d.minCoeff() <= 1e-12 * largest) {
        throw Error(ErrorCode::SingularCovariance, "pooled covariance is not positive definite");
    }
    return ldlt;
}

}  // namespace

LdaStatistics lda_fit_statistics(const Matrix& x, std::span<const std::int64_t> y, double shrinkage) {
    if (!(shrinkage >= 0.0 && shrinkage <= 1.0)) throw Error(ErrorCode::InvalidArgument, "shrinkage must lie in [0, 1]");
    if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "row count differs from label count");
    const auto enc = encode_labels(y);
    const std::size_t c = enc.classes.size();
    const std::size_t d = x.cols();
    const std::size_t n = x.rows();

    LdaStatistics s;
    s.classes = enc.classes;
    s.means = Matrix(c, d);
    s.priors.assign(c, 0.0);
    std::vector<double> count(c, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto k = enc.index[r];
        count[k] += 1.0;
        for (std::size_t j = 0; j < d; ++j) s.means(k, j) += x(r, j);
    }
    for (std::size_t k = 0; k < c; ++k) {
        if (count[k] < 2.0 && shrinkage == 0.0) {
            throw Error(ErrorCode::DegenerateClass, "class " + std::to_string(enc.classes[k]) +
                                                        " has a single row and shrinkage is 0");
        }
        for (std::size_t j = 0; j < d; ++j) s.means(k, j) /= count[k];
        s.priors[k] = count[k] / static_cast<double>(n);
    }

    s.covariance = Matrix(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const auto k = enc.index[r];
        for (std::size_t i = 0; i < d; ++i) {
            const double di = x(r, i) - s.means(k, i);
            for (std::size_t j = i; j < d; ++j) s.covariance(i, j) += di * (x(r, j) - s.means(k, j));
        }
    }
    const double dof = n > c ? static_cast<double>(n - c) : 1.0;
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            s.covariance(i, j) /= dof;
            s.covariance(j, i) = s.covariance(i, j);
        }
        trace += s.covariance(i, i);
    }
    if (shrinkage > 0.0) {
        const double target = trace / static_cast<double>(d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                s.covariance(i, j) = (1.0 - shrinkage) * s.covariance(i, j) + (i == j ? shrinkage * target : 0.0);
            }
        }
    }
    factor(s.covariance);
    return s;
}

void LinearDiscriminant::prepare() {
    const auto ldlt = factor(stats_.covariance);
    const std::size_t c = stats_.means.rows();
    const std::size_t d = stats_.covariance.rows();
    coef_ = Matrix(c, d);
    offset_.assign(c, 0.0);
    for (std::size_t k = 0; k < c; ++k) {
        Eigen::VectorXd mu(static_cast<Eigen::Index>(d));
        for (std::size_t j = 0; j < d; ++j) mu(static_cast<Eigen::Index>(j)) = stats_.means(k, j);
        const Eigen::VectorXd w = ldlt.solve(mu);
        for (std::size_t j = 0; j < d; ++j) coef_(k, j) = w(static_cast<Eigen::Index>(j));
        offset_[k] = -0.5 * mu.dot(w) + std::log(stats_.priors[k]);
    }
}

std::unique_ptr<LinearDiscriminant> LinearDiscriminant::fit(const LdaParams& p, const Matrix& x,
                                                            std::span<const std::int64_t> y) {
    auto model = std::unique_ptr<LinearDiscriminant>(new LinearDiscriminant());
    model->stats_ = lda_fit_statistics(x, y, p.shrinkage);
    model->prepare();
    return model;
}

std::vector<double> LinearDiscriminant::discriminants(std::span<const double> row) const {
    if (row.size() != coef_.cols()) throw Error(ErrorCode::DimensionMismatch, "row width differs from model");
    std::vector<double> delta(offset_);
    for (std::size_t k = 0; k < delta.size(); ++k) {
        for (std::size_t j = 0; j < row.size(); ++j) delta[k] += row[j] * coef_(k, j);
    }
    return delta;
}

Matrix LinearDiscriminant::proba_impl(const Matrix& x) const {
    Matrix p(x.rows(), offset_.size());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto s = softmax(discriminants(x.row(r)));
        std::copy(s.begin(), s.end(), p.row(r).begin());
    }
    return p;
}

void LinearDiscriminant::save_state(std::ostream& out) const {
    model_io::write_matrix(out, "means", stats_.means);
    model_io::write_matrix(out, "covariance", stats_.covariance);
    model_io::write_values(out, "priors", stats_.priors);
}

std::unique_ptr<LinearDiscriminant> LinearDiscriminant::load_state(std::istream& in) {
    auto model = std::unique_ptr<LinearDiscriminant>(new LinearDiscriminant());
    model->stats_.means = model_io::read_matrix(in, "means");
    model->stats_.covariance = model_io::read_matrix(in, "covariance");
    model->stats_.priors = model_io::read_values(in, "priors");
    model->prepare();
    return model;
}

}  // namespace touchauth
