#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "model_io.hpp"
#include "touchauth/models.hpp"

namespace touchauth {

std::unique_ptr<GaussianNaiveBayes> GaussianNaiveBayes::fit(const NaiveBayesParams& p, const Matrix& x,
                                                            const EncodedLabels& y) {
    if (!(p.variance_floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "variance floor must be positive");
    const std::size_t c = y.classes.size();
    const std::size_t d = x.cols();
    auto model = std::unique_ptr<GaussianNaiveBayes>(new GaussianNaiveBayes());
    model->mean_ = Matrix(c, d);
    model->var_ = Matrix(c, d);
    std::vector<double> count(c, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto k = y.index[r];
        count[k] += 1.0;
        for (std::size_t j = 0; j < d; ++j) model->mean_(k, j) += x(r, j);
    }
    for (std::size_t k = 0; k < c; ++k) {
        if (count[k] < 2.0) {
            throw Error(ErrorCode::DegenerateClass,
                        "class " + std::to_string(y.classes[k]) + " has a single row; variance undefined");
        }
        for (std::size_t j = 0; j < d; ++j) model->mean_(k, j) /= count[k];
    }
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto k = y.index[r];
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = x(r, j) - model->mean_(k, j);
            model->var_(k, j) += dev * dev;
        }
    }
    model->log_prior_.resize(c);
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t j = 0; j < d; ++j) model->var_(k, j) = model->var_(k, j) / count[k] + p.variance_floor;
        model->log_prior_[k] = std::log(count[k] / static_cast<double>(x.rows()));
    }
    return model;
}

Matrix GaussianNaiveBayes::proba_impl(const Matrix& x) const {
    const std::size_t c = log_prior_.size();
    Matrix p(x.rows(), c);
    std::vector<double> joint(c);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        for (std::size_t k = 0; k < c; ++k) {
            double lj = log_prior_[k];
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double v = var_(k, j);
                const double dev = row[j] - mean_(k, j);
                lj -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + dev * dev / v);
            }
            joint[k] = lj;
        }
        const auto s = softmax(joint);
        std::copy(s.begin(), s.end(), p.row(r).begin());
    }
    return p;
}

void GaussianNaiveBayes::save_state(std::ostream& out) const {
    model_io::write_matrix(out, "means", mean_);
    model_io::write_matrix(out, "variances", var_);
    model_io::write_values(out, "log_priors", log_prior_);
}

std::unique_ptr<GaussianNaiveBayes> GaussianNaiveBayes::load_state(std::istream& in) {
    auto model = std::unique_ptr<GaussianNaiveBayes>(new GaussianNaiveBayes());
    model->mean_ = model_io::read_matrix(in, "means");
    model->var_ = model_io::read_matrix(in, "variances");
    model->log_prior_ = model_io::read_values(in, "log_priors");
    return model;
}

}  // namespace touchauth
