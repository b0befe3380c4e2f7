#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "test_data.hpp"
#include "touchauth/classifiers.hpp"
#include "touchauth/error.hpp"
#include "touchauth/models.hpp"

using namespace touchauth;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::Io;
}

double training_accuracy(const Classifier& model, const Matrix& x, const std::vector<std::int64_t>& y) {
    const auto pred = model.predict(x);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hits += pred[i] == y[i];
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

struct Labelled {
    Matrix x;
    std::vector<std::int64_t> y;
};

Labelled xor_data(std::size_t per_corner, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.05);
    Labelled d{Matrix(0, 2), {}};
    for (std::size_t i = 0; i < per_corner; ++i) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const double row[] = {2.0 * a - 1.0 + jitter(rng), 2.0 * b - 1.0 + jitter(rng)};
                d.x.append_row(row);
                d.y.push_back(a ^ b);
            }
        }
    }
    return d;
}

// Class 0 at {-4, -2}, class 1 at {2, 4}: means -3 and 3, equal spread.
Labelled symmetric_pair() {
    return {Matrix(4, 1, {-4, -2, 2, 4}), {0, 0, 1, 1}};
}

}  // namespace

TEST(EncodeLabels, SortedDense) {
    const std::vector<std::int64_t> y = {7, -2, 7, 3};
    const auto enc = encode_labels(y);
    EXPECT_EQ(enc.classes, (std::vector<std::int64_t>{-2, 3, 7}));
    EXPECT_EQ(enc.index, (std::vector<std::size_t>{2, 0, 2, 1}));
}

TEST(LogisticRegression, CannotFitXor) {
    const auto d = xor_data(25, 1);
    const auto model = train(ClassifierSpec::defaults(ClassifierKind::LogReg), d.x, d.y, 1);
    EXPECT_LE(training_accuracy(*model, d.x, d.y), 0.75);
}

TEST(LogisticRegression, SeparatesLinearDataAndLossFalls) {
    const auto data = touchauth::testing::gaussian_blobs(3, 40, 2, 6.0, 3);
    const auto model = train(ClassifierSpec::defaults(ClassifierKind::LogReg), data.rows, data.labels, 2);
    EXPECT_GE(training_accuracy(*model, data.rows, data.labels), 0.95);
    const auto& trace = model->info().loss_trace;
    ASSERT_EQ(trace.size(), 101u);
    EXPECT_NEAR(trace.front(), std::log(3.0), 1e-9);  // zero init: uniform predictions
    EXPECT_LE(trace.back(), trace.front());
}

TEST(DeepNeuralNetwork, FitsXor) {
    const auto d = xor_data(25, 2);
    auto spec = ClassifierSpec::defaults(ClassifierKind::DNN);
    auto& p = std::get<DnnParams>(spec.params);
    p.hidden = {16, 16};
    p.epochs = 200;
    p.learning_rate = 0.05;
    const auto model = train(spec, d.x, d.y, 4);
    EXPECT_GE(training_accuracy(*model, d.x, d.y), 0.95);
    const auto& trace = model->info().loss_trace;
    ASSERT_EQ(trace.size(), 201u);
    EXPECT_LE(trace.back(), trace.front());
}

TEST(DenseNetwork, GradientMatchesFiniteDifferences) {
    DenseNetwork<double> net({3, 5, 4, 2}, DenseNetwork<double>::Init::HeUniform, 8);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd inputs(3, 6);
    for (Eigen::Index i = 0; i < inputs.size(); ++i) inputs.data()[i] = normal(rng);
    const std::vector<std::size_t> targets = {0, 1, 1, 0, 1, 0};
    const auto g = net.gradient(inputs, targets);
    EXPECT_NEAR(g.loss, net.loss(inputs, targets), 1e-12);

    std::vector<double> analytic;
    for (std::size_t l = 0; l < net.layers(); ++l) {
        analytic.insert(analytic.end(), g.weights[l].data(), g.weights[l].data() + g.weights[l].size());
        analytic.insert(analytic.end(), g.biases[l].data(), g.biases[l].data() + g.biases[l].size());
    }
    auto params = net.parameters();
    ASSERT_EQ(params.size(), analytic.size());
    const double h = 1e-6;
    for (std::size_t i = 0; i < params.size(); i += 3) {
        const double keep = params[i];
        params[i] = keep + h;
        net.set_parameters(params);
        const double up = net.loss(inputs, targets);
        params[i] = keep - h;
        net.set_parameters(params);
        const double down = net.loss(inputs, targets);
        params[i] = keep;
        net.set_parameters(params);
        const double numeric = (up - down) / (2.0 * h);
        EXPECT_NEAR(analytic[i], numeric, 1e-5 * std::max(1.0, std::abs(numeric))) << "parameter " << i;
    }
}

TEST(LinearDiscriminant, SymmetricBoundaryAtMidpoint) {
    const auto d = symmetric_pair();
    auto spec = ClassifierSpec::defaults(ClassifierKind::LDA);
    std::get<LdaParams>(spec.params).shrinkage = 0.0;
    const auto model = train(spec, d.x, d.y, 1);
    const auto& lda = dynamic_cast<const LinearDiscriminant&>(*model);
    const double origin[] = {0.0};
    const auto g = lda.discriminants(origin);
    EXPECT_NEAR(g[0], g[1], 1e-12);
    EXPECT_EQ(model->predict(Matrix(2, 1, {-0.1, 0.1})), (std::vector<std::int64_t>{0, 1}));
}

TEST(LinearDiscriminant, HandComputedTwoDimensional) {
    // Squares around (1,1) and (5,5): pooled covariance 8/6 I, so S^-1 = 0.75 I.
    Matrix x(8, 2, {0, 0, 2, 0, 0, 2, 2, 2, 4, 4, 6, 4, 4, 6, 6, 6});
    const std::vector<std::int64_t> y = {0, 0, 0, 0, 1, 1, 1, 1};
    const auto stats = lda_fit_statistics(x, y, 0.0);
    EXPECT_EQ(stats.means(0, 0), 1.0);
    EXPECT_EQ(stats.means(1, 1), 5.0);
    EXPECT_NEAR(stats.covariance(0, 0), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(stats.covariance(0, 1), 0.0, 1e-15);
    EXPECT_EQ(stats.priors, (std::vector<double>{0.5, 0.5}));

    LdaParams p;
    p.shrinkage = 0.0;
    const auto model = LinearDiscriminant::fit(p, x, y);
    const double q[] = {3.0, 1.0};
    const auto g = model->discriminants(q);
    EXPECT_NEAR(g[0], 0.75 * 4.0 - 0.75 * 2.0 / 2.0 + std::log(0.5), 1e-12);
    EXPECT_NEAR(g[1], 0.75 * 20.0 - 0.75 * 50.0 / 2.0 + std::log(0.5), 1e-12);
}

TEST(LinearDiscriminant, DuplicatedColumnIsSingularWithoutShrinkage) {
    const auto data = touchauth::testing::gaussian_blobs(2, 10, 2, 3.0, 5);
    Matrix x(data.size(), 3);
    for (std::size_t r = 0; r < data.size(); ++r) {
        x(r, 0) = data.rows(r, 0);
        x(r, 1) = data.rows(r, 1);
        x(r, 2) = data.rows(r, 0);
    }
    auto spec = ClassifierSpec::defaults(ClassifierKind::LDA);
    std::get<LdaParams>(spec.params).shrinkage = 0.0;
    EXPECT_EQ(code_of([&] { train(spec, x, data.labels, 1); }), ErrorCode::SingularCovariance);
    std::get<LdaParams>(spec.params).shrinkage = 0.1;
    EXPECT_NO_THROW(train(spec, x, data.labels, 1));
}

TEST(LinearDiscriminant, SingleRowClassWithoutShrinkage) {
    Matrix x(3, 1, {0, 1, 5});
    const std::vector<std::int64_t> y = {0, 0, 1};
    EXPECT_EQ(code_of([&] { lda_fit_statistics(x, y, 0.0); }), ErrorCode::DegenerateClass);
    EXPECT_EQ(code_of([&] { lda_fit_statistics(x, y, 1.5); }), ErrorCode::InvalidArgument);
}

TEST(NaiveBayes, SymmetricPosteriorAndBoundary) {
    const auto d = symmetric_pair();
    const auto model = train(ClassifierSpec::defaults(ClassifierKind::GaussianNB), d.x, d.y, 1);
    const auto p = model->predict_proba(Matrix(3, 1, {0.0, -0.01, 0.01}));
    EXPECT_NEAR(p(0, 0), 0.5, 1e-12);
    EXPECT_GT(p(1, 0), 0.5);
    EXPECT_GT(p(2, 1), 0.5);
    const auto& nb = dynamic_cast<const GaussianNaiveBayes&>(*model);
    EXPECT_EQ(nb.means()(0, 0), -3.0);
    EXPECT_EQ(nb.means()(1, 0), 3.0);
    EXPECT_NEAR(nb.variances()(0, 0), 1.0, 1e-6);
}

TEST(NaiveBayes, ConstantFeatureUsesVarianceFloor) {
    Matrix x(4, 2, {1, 7, 2, 7, 8, 7, 9, 7});
    const std::vector<std::int64_t> y = {0, 0, 1, 1};
    const auto model = train(ClassifierSpec::defaults(ClassifierKind::GaussianNB), x, y, 1);
    const auto p = model->predict_proba(x);
    for (double v : p.data()) EXPECT_TRUE(std::isfinite(v));
    EXPECT_EQ(model->predict(x), y);
}

TEST(KNearestNeighbors, OneNeighbourReturnsTrainingLabels) {
    const auto data = touchauth::testing::gaussian_blobs(4, 10, 3, 0.5, 2);
    auto spec = ClassifierSpec::defaults(ClassifierKind::KNN);
    std::get<KnnParams>(spec.params).k = 1;
    const auto model = train(spec, data.rows, data.labels, 1);
    EXPECT_EQ(model->predict(data.rows), data.labels);
}

TEST(KNearestNeighbors, VoteFractionAndOracle) {
    // Three class-1 points near the query, two class-2 points a bit further.
    Matrix x(7, 1, {0.1, 0.2, -0.1, 0.5, -0.5, 9.0, 10.0});
    const std::vector<std::int64_t> y = {1, 1, 1, 2, 2, 2, 2};
    const auto model = train(ClassifierSpec::defaults(ClassifierKind::KNN), x, y, 1);
    const auto p = model->predict_proba(Matrix(1, 1, {0.0}));
    EXPECT_DOUBLE_EQ(p(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(p(0, 1), 0.4);

    const auto data = touchauth::testing::gaussian_blobs(3, 25, 2, 1.0, 11);
    const auto full = train(ClassifierSpec::defaults(ClassifierKind::KNN), data.rows, data.labels, 1);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2, 2);
    Matrix queries(40, 2);
    for (auto& v : queries.data()) v = u(rng);
    const auto pred = full->predict(queries);
    for (std::size_t r = 0; r < 40; ++r) {
        const std::vector<double> q(queries.row(r).begin(), queries.row(r).end());
        EXPECT_EQ(pred[r], touchauth::testing::knn_oracle(data.rows, data.labels, q, 5));
    }
}

TEST(KNearestNeighbors, KLargerThanTrainingSetIsClamped) {
    Matrix x(3, 1, {0, 1, 5});
    const std::vector<std::int64_t> y = {0, 0, 1};
    auto spec = ClassifierSpec::defaults(ClassifierKind::KNN);
    std::get<KnnParams>(spec.params).k = 50;
    const auto model = train(spec, x, y, 1);
    EXPECT_EQ(model->predict(Matrix(1, 1, {4.0})), (std::vector<std::int64_t>{0}));
}

TEST(DecisionTree, MemorisesDistinctRows) {
    const auto data = touchauth::testing::gaussian_blobs(5, 30, 4, 0.3, 8);
    const auto model = train(ClassifierSpec::defaults(ClassifierKind::CART), data.rows, data.labels, 1);
    EXPECT_EQ(model->predict(data.rows), data.labels);
}

TEST(DecisionTree, HandBuiltDepthTwo) {
    // (0,0)->1, (0,1)->2, (1,0)->3, (1,1)->3: root on x0 (Gini 0.25 vs 0.5 for x1), left child on x1.
    Matrix x(8, 2, {0, 0, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 0, 1, 1});
    const std::vector<std::int64_t> y = {1, 2, 3, 3, 1, 2, 3, 3};
    const auto model = DecisionTree::fit(CartParams{}, x, encode_labels(y));
    const auto& nodes = model->nodes();
    ASSERT_GE(nodes.size(), 5u);
    EXPECT_EQ(nodes[0].feature, 0);
    EXPECT_DOUBLE_EQ(nodes[0].threshold, 0.5);
    EXPECT_EQ(model->depth(), 2u);
    const auto& left = nodes[static_cast<std::size_t>(nodes[0].left)];
    EXPECT_EQ(left.feature, 1);
    EXPECT_EQ(nodes[static_cast<std::size_t>(nodes[0].right)].feature, -1);
    const double a[] = {0.2, 0.9};
    EXPECT_EQ(nodes[model->leaf_for(a)].class_counts, (std::vector<double>{0, 2, 0}));
    EXPECT_FALSE(model->to_text().empty());
}

TEST(DecisionTree, DepthAndLeafLimits) {
    const auto data = touchauth::testing::gaussian_blobs(4, 30, 3, 0.5, 9);
    const auto stump = DecisionTree::fit(CartParams{1, 1}, data.rows, encode_labels(data.labels));
    EXPECT_EQ(stump->depth(), 1u);
    const auto leafy = DecisionTree::fit(CartParams{0, 10}, data.rows, encode_labels(data.labels));
    for (const auto& n : leafy->nodes()) {
        if (n.feature >= 0) continue;
        double total = 0.0;
        for (double c : n.class_counts) total += c;
        EXPECT_GE(total, 10.0);
    }
}

TEST(Svm, DualFeasibilityAndKkt) {
    const auto data = touchauth::testing::gaussian_blobs(2, 30, 2, 1.5, 13);
    std::vector<int> sign;
    for (auto l : data.labels) sign.push_back(l == 1 ? 1 : -1);
    const double c = 1.0, gamma = 0.5;
    const auto sol = solve_binary_svm(data.rows, sign, c, gamma, 1e-4, 100000);
    ASSERT_TRUE(sol.converged);
    double balance = 0.0;
    for (std::size_t i = 0; i < sol.alpha.size(); ++i) {
        EXPECT_GE(sol.alpha[i], 0.0);
        EXPECT_LE(sol.alpha[i], c);
        balance += sol.alpha[i] * sign[i];
    }
    EXPECT_NEAR(balance, 0.0, 1e-9);
    const double tol = 1e-3;
    for (std::size_t i = 0; i < sol.alpha.size(); ++i) {
        double f = -sol.rho;
        for (std::size_t j = 0; j < sol.alpha.size(); ++j) {
            f += sol.alpha[j] * sign[j] * rbf_kernel(data.rows.row(i), data.rows.row(j), gamma);
        }
        const double margin = sign[i] * f;
        if (sol.alpha[i] <= 1e-12) {
            EXPECT_GE(margin, 1.0 - tol) << i;
        } else if (sol.alpha[i] >= c - 1e-12) {
            EXPECT_LE(margin, 1.0 + tol) << i;
        } else {
            EXPECT_NEAR(margin, 1.0, tol) << i;
        }
    }
}

TEST(Svm, IterationCapRecordsWarning) {
    const auto data = touchauth::testing::gaussian_blobs(2, 40, 2, 0.5, 14);
    auto spec = ClassifierSpec::defaults(ClassifierKind::SvmRbf);
    std::get<SvmParams>(spec.params).max_iterations = 2;
    const auto model = train(spec, data.rows, data.labels, 1);
    EXPECT_FALSE(model->info().converged);
    EXPECT_FALSE(model->info().warnings.empty());
    EXPECT_EQ(model->predict(data.rows).size(), data.size());
}

TEST(Svm, DefaultGammaIsInverseWidth) {
    const auto data = touchauth::testing::gaussian_blobs(3, 10, 4, 3.0, 15);
    const auto model = train(ClassifierSpec::defaults(ClassifierKind::SvmRbf), data.rows, data.labels, 1);
    EXPECT_EQ(dynamic_cast<const SvmRbf&>(*model).gamma(), 0.25);
    EXPECT_GE(training_accuracy(*model, data.rows, data.labels), 0.9);
}
