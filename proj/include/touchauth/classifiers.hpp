#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "touchauth/matrix.hpp"

namespace touchauth {

/// Table order: LR, LDA, kNN, CART, NB, SVM, DNN.
enum class ClassifierKind : std::uint8_t { LogReg, LDA, KNN, CART, GaussianNB, SvmRbf, DNN };

inline constexpr ClassifierKind kAllClassifierKinds[] = {
    ClassifierKind::LogReg, ClassifierKind::LDA,    ClassifierKind::KNN, ClassifierKind::CART,
    ClassifierKind::GaussianNB, ClassifierKind::SvmRbf, ClassifierKind::DNN};

/// "lr", "lda", "knn", "cart", "nb", "svm", "dnn".
std::string_view short_name(ClassifierKind kind) noexcept;
std::string_view display_name(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> kind_from_short_name(std::string_view name) noexcept;

/// Multinomial logistic regression trained by mini-batch SGD with momentum.
struct LogRegParams {
    double learning_rate = 0.1;
    double momentum = 0.9;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
};

struct LdaParams {
    /// Blend toward a scaled identity: (1 - s) * S + s * (tr S / d) * I.
    double shrinkage = 1e-3;
};

struct KnnParams {
    std::size_t k = 5;
};

struct CartParams {
    std::size_t max_depth = 0;  // 0 = unlimited
    std::size_t min_leaf = 1;
};

struct NaiveBayesParams {
    double variance_floor = 1e-9;
};

struct SvmParams {
    double c = 1.0;
    double gamma = 0.0;  // 0 = 1 / d
    double tolerance = 1e-3;
    std::size_t max_iterations = 10000;  // per one-vs-rest problem
};

struct DnnParams {
    std::vector<std::size_t> hidden = {3000, 1000, 300};
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
};

using ClassifierParams =
    std::variant<LogRegParams, LdaParams, KnnParams, CartParams, NaiveBayesParams, SvmParams, DnnParams>;

struct ClassifierSpec {
    ClassifierParams params;

    ClassifierKind kind() const noexcept { return static_cast<ClassifierKind>(params.index()); }

    /// Default hyperparameters for `kind`.
    static ClassifierSpec defaults(ClassifierKind kind);

    /// One-line `key=value` rendering of the hyperparameters.
    std::string describe() const;
};

/// Metadata recorded while fitting.
struct TrainingInfo {
    std::uint64_t seed = 0;
    std::vector<double> loss_trace;  // iterative kinds: initial loss then one entry per epoch
    bool converged = true;
    std::size_t iterations = 0;
    std::vector<std::string> warnings;
};

/// A fitted model. Immutable after training; safe to share across threads
/// for prediction.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual ClassifierKind kind() const noexcept = 0;

    const std::vector<std::int64_t>& classes() const noexcept { return classes_; }
    std::size_t dims() const noexcept { return dims_; }
    const TrainingInfo& info() const noexcept { return info_; }

    /// One label per row. Throws DimensionMismatch on width mismatch.
    std::vector<std::int64_t> predict(const Matrix& x) const;

    /// rows x classes; each row non-negative and summing to one.
    Matrix predict_proba(const Matrix& x) const;

    /// Versioned text serialization (see docs/model_format.md).
    void save(std::ostream& out) const;
    static std::unique_ptr<Classifier> load(std::istream& in);

protected:
    Classifier() = default;

    /// Class index per row; default is argmax of predict_proba, ties to the lower index.
    virtual std::vector<std::size_t> predict_indices(const Matrix& x) const;
    virtual Matrix proba_impl(const Matrix& x) const = 0;
    virtual void save_state(std::ostream& out) const = 0;

    void check_width(const Matrix& x) const;

    std::vector<std::int64_t> classes_;
    std::size_t dims_ = 0;
    TrainingInfo info_;

    friend std::unique_ptr<Classifier> train(const ClassifierSpec&, const Matrix&, std::span<const std::int64_t>,
                                             std::uint64_t);
};

/// Fits `spec` on rows `x` with labels `y`. Deterministic per seed.
/// Requires at least two classes and as many rows as classes.
std::unique_ptr<Classifier> train(const ClassifierSpec& spec, const Matrix& x, std::span<const std::int64_t> y,
                                  std::uint64_t seed);

// Building blocks shared by the models.

/// 1 - sum (n_i / n)^2. Throws EmptyNode when the counts sum to zero.
double gini_impurity(std::span<const double> label_counts);

/// exp(-gamma * |a - b|^2). Throws LengthMismatch.
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Max-shifted softmax.
std::vector<double> softmax(std::span<const double> z);

/// Layer layout of the dense network: d -> hidden... -> classes.
struct NetworkSpec {
    std::vector<std::size_t> widths;
    std::vector<std::size_t> layer_parameters;  // in * out + out per layer
    std::size_t parameter_count = 0;
    std::size_t trainable_parameters = 0;
    std::size_t non_trainable_parameters = 0;
};

NetworkSpec build_dnn(std::size_t input_dims, std::size_t class_count, std::span<const std::size_t> hidden);

/// Default 3000 -> 1000 -> 300 hidden stack.
NetworkSpec build_dnn(std::size_t input_dims, std::size_t class_count);

}  // namespace touchauth
