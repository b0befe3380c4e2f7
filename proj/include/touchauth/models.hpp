#pragma once

// Concrete classifier types behind touchauth::train(). Exposed for tests and
// for callers that need model internals (tree structure, LDA statistics,
// SVM dual solutions).

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "touchauth/classifiers.hpp"
#include "touchauth/dense_network.hpp"

namespace touchauth {

/// Labels mapped to dense indices over the sorted distinct label set.
struct EncodedLabels {
    std::vector<std::int64_t> classes;
    std::vector<std::size_t> index;
};

EncodedLabels encode_labels(std::span<const std::int64_t> y);

class LogisticRegression final : public Classifier {
public:
    static std::unique_ptr<LogisticRegression> fit(const LogRegParams& p, const Matrix& x, const EncodedLabels& y,
                                                   std::uint64_t seed);
    static std::unique_ptr<LogisticRegression> load_state(std::istream& in);

    ClassifierKind kind() const noexcept override { return ClassifierKind::LogReg; }
    const DenseNetwork<double>& network() const noexcept { return net_; }

private:
    Matrix proba_impl(const Matrix& x) const override;
    void save_state(std::ostream& out) const override;

    DenseNetwork<double> net_;
};

class DeepNeuralNetwork final : public Classifier {
public:
    static std::unique_ptr<DeepNeuralNetwork> fit(const DnnParams& p, const Matrix& x, const EncodedLabels& y,
                                                  std::uint64_t seed);
    static std::unique_ptr<DeepNeuralNetwork> load_state(std::istream& in);

    ClassifierKind kind() const noexcept override { return ClassifierKind::DNN; }
    const DenseNetwork<float>& network() const noexcept { return net_; }

private:
    Matrix proba_impl(const Matrix& x) const override;
    void save_state(std::ostream& out) const override;

    DenseNetwork<float> net_;
};

/// Class means, shrunk pooled covariance and priors of a linear
/// discriminant. Discriminant: x' S^-1 mu_k - mu_k' S^-1 mu_k / 2 + log pi_k.
struct LdaStatistics {
    std::vector<std::int64_t> classes;
    Matrix means;       // classes x d
    Matrix covariance;  // d x d, after shrinkage
    std::vector<double> priors;
};

/// Throws SingularCovariance when the (shrunk) covariance is not positive
/// definite, DegenerateClass when shrinkage is 0 and a class has one row.
LdaStatistics lda_fit_statistics(const Matrix& x, std::span<const std::int64_t> y, double shrinkage);

class LinearDiscriminant final : public Classifier {
public:
    static std::unique_ptr<LinearDiscriminant> fit(const LdaParams& p, const Matrix& x,
                                                   std::span<const std::int64_t> y);
    static std::unique_ptr<LinearDiscriminant> load_state(std::istream& in);

    ClassifierKind kind() const noexcept override { return ClassifierKind::LDA; }
    const LdaStatistics& statistics() const noexcept { return stats_; }

    /// Discriminant score of every class for one row.
    std::vector<double> discriminants(std::span<const double> row) const;

private:
    void prepare();
    Matrix proba_impl(const Matrix& x) const override;
    void save_state(std::ostream& out) const override;

    LdaStatistics stats_;
    Matrix coef_;                 // classes x d: S^-1 mu_k
    std::vector<double> offset_;  // -mu_k' S^-1 mu_k / 2 + log pi_k
};

/// Brute-force Euclidean k nearest neighbours. Neighbour ties at equal
/// distance go to the lower training index; vote ties go to the larger
/// summed inverse distance, then the lower label.
class KNearestNeighbors final : public Classifier {
public:
    static std::unique_ptr<KNearestNeighbors> fit(const KnnParams& p, const Matrix& x, const EncodedLabels& y);
    static std::unique_ptr<KNearestNeighbors> load_state(std::istream& in);

    ClassifierKind kind() const noexcept override { return ClassifierKind::KNN; }
    std::size_t k() const noexcept { return k_; }

private:
    struct Votes {
        std::vector<double> count;
        std::vector<double> inverse_distance;
    };
    Votes votes(std::span<const double> row) const;

    std::vector<std::size_t> predict_indices(const Matrix& x) const override;
    Matrix proba_impl(const Matrix& x) const override;
    void save_state(std::ostream& out) const override;

    std::size_t k_ = 5;
    Matrix train_;
    std::vector<std::size_t> target_;
};

/// CART with Gini splits. Rows go left when x[feature] <= threshold.
class DecisionTree final : public Classifier {
public:
    struct Node {
        std::int32_t feature = -1;  // -1 for leaves
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::vector<double> class_counts;
    };

    static std::unique_ptr<DecisionTree> fit(const CartParams& p, const Matrix& x, const EncodedLabels& y);
    static std::unique_ptr<DecisionTree> load_state(std::istream& in);

    ClassifierKind kind() const noexcept override { return ClassifierKind::CART; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;

    /// Index of the leaf reached by `row`.
    std::size_t leaf_for(std::span<const double> row) const;

    /// Indented human-readable dump.
    std::string to_text() const;

private:
    Matrix proba_impl(const Matrix& x) const override;
    void save_state(std::ostream& out) const override;

    std::vector<Node> nodes_;
};

class GaussianNaiveBayes final : public Classifier {
public:
    static std::unique_ptr<GaussianNaiveBayes> fit(const NaiveBayesParams& p, const Matrix& x, const EncodedLabels& y);
    static std::unique_ptr<GaussianNaiveBayes> load_state(std::istream& in);

    ClassifierKind kind() const noexcept override { return ClassifierKind::GaussianNB; }
    const Matrix& means() const noexcept { return mean_; }
    const Matrix& variances() const noexcept { return var_; }

private:
    Matrix proba_impl(const Matrix& x) const override;
    void save_state(std::ostream& out) const override;

    Matrix mean_;
    Matrix var_;
    std::vector<double> log_prior_;
};

/// Dual solution of one binary soft-margin RBF SVM.
/// Decision value: sum_i alpha_i y_i K(x_i, x) - rho.
struct BinarySvmSolution {
    std::vector<double> alpha;
    double rho = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    double final_gap = 0.0;  // max KKT violation m(alpha) - M(alpha) at exit
};

/// SMO with maximal-violating-pair working set selection. `sign` entries are +1/-1.
BinarySvmSolution solve_binary_svm(const Matrix& x, std::span<const int> sign, double c, double gamma,
                                   double tolerance, std::size_t max_iterations);

/// One-vs-rest RBF SVM. Probabilities are logistic-squashed decision values,
/// normalised across classes.
class SvmRbf final : public Classifier {
public:
    static std::unique_ptr<SvmRbf> fit(const SvmParams& p, const Matrix& x, const EncodedLabels& y);
    static std::unique_ptr<SvmRbf> load_state(std::istream& in);

    ClassifierKind kind() const noexcept override { return ClassifierKind::SvmRbf; }
    double gamma() const noexcept { return gamma_; }

    /// One decision value per class for one row.
    std::vector<double> decision_values(std::span<const double> row) const;

private:
    Matrix proba_impl(const Matrix& x) const override;
    void save_state(std::ostream& out) const override;

    double gamma_ = 1.0;
    Matrix support_;              // union of support vectors over all classes
    Matrix coef_;                 // classes x support: alpha_i * y_i
    std::vector<double> rho_;
};

}  // namespace touchauth
