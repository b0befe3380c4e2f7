#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <list>
#include <ostream>
#include <unordered_map>

#include "model_io.hpp"
#include "touchauth/models.hpp"

namespace touchauth {

namespace {

/// Kernel rows of the training set: a full matrix when it fits the budget,
/// otherwise an LRU cache of rows.
class KernelRows {
public:
    KernelRows(const Matrix& x, double gamma, std::size_t budget_bytes = std::size_t{256} << 20)
        : x_(x), gamma_(gamma) {
        const std::size_t n = x.rows();
        const std::size_t row_bytes = std::max<std::size_t>(1, n * sizeof(double));
        capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
        if (capacity_ >= n) {
            full_.resize(n);
            for (std::size_t i = 0; i < n; ++i) full_[i] = compute(i);
        }
    }

    const std::vector<double>& row(std::size_t i) {
        if (!full_.empty()) return full_[i];
        if (auto it = cache_.find(i); it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first;
        }
        if (cache_.size() >= capacity_) {
            cache_.erase(lru_.back());
            lru_.pop_back();
        }
        lru_.push_front(i);
        auto [it, _] = cache_.emplace(i, std::make_pair(compute(i), lru_.begin()));
        return it->second.first;
    }

private:
    std::vector<double> compute(std::size_t i) const {
        std::vector<double> k(x_.rows());
        for (std::size_t t = 0; t < x_.rows(); ++t) k[t] = rbf_kernel(x_.row(i), x_.row(t), gamma_);
        return k;
    }

    const Matrix& x_;
    double gamma_;
    std::size_t capacity_ = 0;
    std::vector<std::vector<double>> full_;
    std::list<std::size_t> lru_;
    std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> cache_;
};

BinarySvmSolution solve(KernelRows& kernel, std::span<const int> y, double c, double tolerance,
                        std::size_t max_iterations) {
    const std::size_t n = y.size();
    constexpr double kTau = 1e-12;
    BinarySvmSolution sol;
    sol.alpha.assign(n, 0.0);
    auto& alpha = sol.alpha;
    std::vector<double> grad(n, -1.0);  // Q alpha - e

    auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0.0); };
    auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0.0) || (y[t] < 0 && alpha[t] < c); };

    while (true) {
        std::size_t i = n, j = n;
        double m = -std::numeric_limits<double>::infinity();
        double big_m = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (in_up(t) && v > m) {
                m = v;
                i = t;
            }
            if (in_low(t) && v < big_m) {
                big_m = v;
                j = t;
            }
        }
        sol.final_gap = (i == n || j == n) ? 0.0 : m - big_m;
        if (i == n || j == n || sol.final_gap < tolerance) break;
        if (sol.iterations >= max_iterations) {
            sol.converged = false;
            break;
        }

        const auto& ki = kernel.row(i);
        const auto& kj = kernel.row(j);
        const double yi = y[i], yj = y[j];
        const double old_ai = alpha[i], old_aj = alpha[j];
        if (yi != yj) {
            double quad = ki[i] + kj[j] + 2.0 * ki[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = ki[i] + kj[j] - 2.0 * ki[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (yi * ki[t] * dai + yj * kj[t] * daj);
        ++sol.iterations;
    }

    // Offset from free vectors, or the midpoint of the feasible interval.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] < 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    if (free_count > 0) sol.rho = free_sum / static_cast<double>(free_count);
    else if (std::isfinite(upper) && std::isfinite(lower)) sol.rho = (upper + lower) / 2.0;
    else sol.rho = std::isfinite(upper) ? upper : (std::isfinite(lower) ? lower : 0.0);
    return sol;
}

}  // namespace

BinarySvmSolution solve_binary_svm(const Matrix& x, std::span<const int> sign, double c, double gamma,
                                   double tolerance, std::size_t max_iterations) {
    if (sign.size() != x.rows()) throw Error(ErrorCode::LengthMismatch, "sign vector length differs from rows");
    if (!(c > 0.0) || !(gamma > 0.0) || !(tolerance > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "SVM needs C > 0, gamma > 0, tolerance > 0");
    }
    KernelRows kernel(x, gamma);
    return solve(kernel, sign, c, tolerance, max_iterations);
}

std::unique_ptr<SvmRbf> SvmRbf::fit(const SvmParams& p, const Matrix& x, const EncodedLabels& y) {
    const double gamma = p.gamma > 0.0 ? p.gamma : 1.0 / static_cast<double>(std::max<std::size_t>(1, x.cols()));
    if (!(p.c > 0.0) || !(p.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "SVM needs C > 0, tolerance > 0");
    auto model = std::unique_ptr<SvmRbf>(new SvmRbf());
    model->gamma_ = gamma;
    const std::size_t c = y.classes.size();
    const std::size_t n = x.rows();

    KernelRows kernel(x, gamma);
    std::vector<std::vector<double>> signed_alpha(c, std::vector<double>(n));
    std::vector<int> sign(n);
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t i = 0; i < n; ++i) sign[i] = y.index[i] == k ? 1 : -1;
        const auto sol = solve(kernel, sign, p.c, p.tolerance, p.max_iterations);
        for (std::size_t i = 0; i < n; ++i) signed_alpha[k][i] = sol.alpha[i] * sign[i];
        model->rho_.push_back(sol.rho);
        model->info_.iterations += sol.iterations;
        if (!sol.converged) {
            model->info_.converged = false;
            model->info_.warnings.push_back("class " + std::to_string(y.classes[k]) +
                                            ": iteration cap reached, KKT gap " + text::format_double(sol.final_gap));
        }
    }

    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < c; ++k) {
            if (signed_alpha[k][i] != 0.0) {
                support.push_back(i);
                break;
            }
        }
    }
    model->support_ = x.select_rows(support);
    model->coef_ = Matrix(c, support.size());
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t s = 0; s < support.size(); ++s) model->coef_(k, s) = signed_alpha[k][support[s]];
    }
    return model;
}

std::vector<double> SvmRbf::decision_values(std::span<const double> row) const {
    if (row.size() != support_.cols() && support_.rows() > 0) {
        throw Error(ErrorCode::DimensionMismatch, "row width differs from model");
    }
    std::vector<double> kv(support_.rows());
    for (std::size_t s = 0; s < kv.size(); ++s) kv[s] = rbf_kernel(support_.row(s), row, gamma_);
    std::vector<double> f(rho_.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        double acc = -rho_[k];
        for (std::size_t s = 0; s < kv.size(); ++s) acc += coef_(k, s) * kv[s];
        f[k] = acc;
    }
    return f;
}

Matrix SvmRbf::proba_impl(const Matrix& x) const {
    Matrix p(x.rows(), rho_.size());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto f = decision_values(x.row(r));
        double total = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            p(r, k) = 1.0 / (1.0 + std::exp(-f[k]));
            total += p(r, k);
        }
        for (std::size_t k = 0; k < f.size(); ++k) p(r, k) /= total;
    }
    return p;
}

void SvmRbf::save_state(std::ostream& out) const {
    model_io::write_scalar(out, "gamma", gamma_);
    model_io::write_matrix(out, "support", support_);
    model_io::write_matrix(out, "coef", coef_);
    model_io::write_values(out, "rho", rho_);
}

std::unique_ptr<SvmRbf> SvmRbf::load_state(std::istream& in) {
    auto model = std::unique_ptr<SvmRbf>(new SvmRbf());
    model->gamma_ = model_io::read_scalar<double>(in, "gamma");
    model->support_ = model_io::read_matrix(in, "support");
    model->coef_ = model_io::read_matrix(in, "coef");
    model->rho_ = model_io::read_values(in, "rho");
    return model;
}

}  // namespace touchauth
