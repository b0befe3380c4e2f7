#include "touchauth/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

#include "model_io.hpp"
#include "touchauth/error.hpp"
#include "touchauth/models.hpp"

namespace touchauth {

namespace {

constexpr std::string_view kMagic = "touchauth-model";
constexpr int kFormatVersion = 1;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view short_name(ClassifierKind kind) noexcept {
    switch (kind) {
        case ClassifierKind::LogReg: return "lr";
        case ClassifierKind::LDA: return "lda";
        case ClassifierKind::KNN: return "knn";
        case ClassifierKind::CART: return "cart";
        case ClassifierKind::GaussianNB: return "nb";
        case ClassifierKind::SvmRbf: return "svm";
        case ClassifierKind::DNN: return "dnn";
    }
    return "?";
}

std::string_view display_name(ClassifierKind kind) noexcept {
    switch (kind) {
        case ClassifierKind::LogReg: return "Logistic Regression (LR)";
        case ClassifierKind::LDA: return "Linear Discriminant Analysis (LDA)";
        case ClassifierKind::KNN: return "K-neighbors (kNN)";
        case ClassifierKind::CART: return "Decision Tree (CART)";
        case ClassifierKind::GaussianNB: return "Gaussian Naive Bayes (NB)";
        case ClassifierKind::SvmRbf: return "Support Vector Machine (SVM)";
        case ClassifierKind::DNN: return "Deep Neural Net (DNN)";
    }
    return "?";
}

std::optional<ClassifierKind> kind_from_short_name(std::string_view name) noexcept {
    for (auto k : kAllClassifierKinds) {
        if (short_name(k) == name) return k;
    }
    return std::nullopt;
}

ClassifierSpec ClassifierSpec::defaults(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::LogReg: return {LogRegParams{}};
        case ClassifierKind::LDA: return {LdaParams{}};
        case ClassifierKind::KNN: return {KnnParams{}};
        case ClassifierKind::CART: return {CartParams{}};
        case ClassifierKind::GaussianNB: return {NaiveBayesParams{}};
        case ClassifierKind::SvmRbf: return {SvmParams{}};
        case ClassifierKind::DNN: return {DnnParams{}};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown classifier kind");
}

std::string ClassifierSpec::describe() const {
    using text::format_double;
    std::ostringstream os;
    os << short_name(kind());
    std::visit(Overloaded{
                   [&](const LogRegParams& p) {
                       os << " learning_rate=" << format_double(p.learning_rate)
                          << " momentum=" << format_double(p.momentum) << " epochs=" << p.epochs
                          << " batch_size=" << p.batch_size;
                   },
                   [&](const LdaParams& p) { os << " shrinkage=" << format_double(p.shrinkage); },
                   [&](const KnnParams& p) { os << " k=" << p.k; },
                   [&](const CartParams& p) { os << " max_depth=" << p.max_depth << " min_leaf=" << p.min_leaf; },
                   [&](const NaiveBayesParams& p) { os << " variance_floor=" << format_double(p.variance_floor); },
                   [&](const SvmParams& p) {
                       os << " c=" << format_double(p.c) << " gamma=" << (p.gamma > 0 ? format_double(p.gamma) : "1/d")
                          << " tolerance=" << format_double(p.tolerance) << " max_iterations=" << p.max_iterations;
                   },
                   [&](const DnnParams& p) {
                       os << " hidden=";
                       for (std::size_t i = 0; i < p.hidden.size(); ++i) os << (i ? "x" : "") << p.hidden[i];
                       os << " learning_rate=" << format_double(p.learning_rate)
                          << " momentum=" << format_double(p.momentum) << " epochs=" << p.epochs
                          << " batch_size=" << p.batch_size;
                   },
               },
               params);
    return os.str();
}

void Classifier::check_width(const Matrix& x) const {
    if (x.rows() > 0 && x.cols() != dims_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "model expects " + std::to_string(dims_) + " columns, got " + std::to_string(x.cols()));
    }
}

std::vector<std::size_t> Classifier::predict_indices(const Matrix& x) const {
    const Matrix p = proba_impl(x);
    std::vector<std::size_t> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = p.row(r);
        out[r] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
}

std::vector<std::int64_t> Classifier::predict(const Matrix& x) const {
    check_width(x);
    if (x.rows() == 0) return {};
    const auto idx = predict_indices(x);
    std::vector<std::int64_t> labels(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = classes_[idx[i]];
    return labels;
}

Matrix Classifier::predict_proba(const Matrix& x) const {
    check_width(x);
    if (x.rows() == 0) return Matrix(0, classes_.size());
    return proba_impl(x);
}

void Classifier::save(std::ostream& out) const {
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "kind " << short_name(kind()) << '\n';
    out << "dims " << dims_ << '\n';
    out << "classes " << classes_.size();
    for (auto c : classes_) out << ' ' << c;
    out << '\n';
    out << "seed " << info_.seed << '\n';
    out << "converged " << (info_.converged ? 1 : 0) << '\n';
    out << "iterations " << info_.iterations << '\n';
    model_io::write_values(out, "loss_trace", info_.loss_trace);
    save_state(out);
    out << "end\n";
}

std::unique_ptr<Classifier> Classifier::load(std::istream& in) {
    using namespace model_io;
    expect(in, kMagic);
    const auto version = read_int(in);
    if (version != kFormatVersion) {
        throw Error(ErrorCode::BadValue, "unsupported model format version " + std::to_string(version));
    }
    expect(in, "kind");
    const auto name = next_token(in);
    const auto kind = kind_from_short_name(name);
    if (!kind) throw Error(ErrorCode::BadValue, "unknown model kind '" + name + "'");
    const auto dims = read_scalar<std::size_t>(in, "dims");
    expect(in, "classes");
    std::vector<std::int64_t> classes(read_size(in));
    for (auto& c : classes) c = read_int(in);
    TrainingInfo info;
    info.seed = static_cast<std::uint64_t>(read_scalar<std::int64_t>(in, "seed"));
    info.converged = read_scalar<int>(in, "converged") != 0;
    info.iterations = read_scalar<std::size_t>(in, "iterations");
    info.loss_trace = read_values(in, "loss_trace");

    std::unique_ptr<Classifier> model;
    switch (*kind) {
        case ClassifierKind::LogReg: model = LogisticRegression::load_state(in); break;
        case ClassifierKind::LDA: model = LinearDiscriminant::load_state(in); break;
        case ClassifierKind::KNN: model = KNearestNeighbors::load_state(in); break;
        case ClassifierKind::CART: model = DecisionTree::load_state(in); break;
        case ClassifierKind::GaussianNB: model = GaussianNaiveBayes::load_state(in); break;
        case ClassifierKind::SvmRbf: model = SvmRbf::load_state(in); break;
        case ClassifierKind::DNN: model = DeepNeuralNetwork::load_state(in); break;
    }
    expect(in, "end");
    model->classes_ = std::move(classes);
    model->dims_ = dims;
    model->info_ = std::move(info);
    return model;
}

EncodedLabels encode_labels(std::span<const std::int64_t> y) {
    EncodedLabels enc;
    std::set<std::int64_t> distinct(y.begin(), y.end());
    enc.classes.assign(distinct.begin(), distinct.end());
    enc.index.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        enc.index[i] = static_cast<std::size_t>(
            std::lower_bound(enc.classes.begin(), enc.classes.end(), y[i]) - enc.classes.begin());
    }
    return enc;
}

std::unique_ptr<Classifier> train(const ClassifierSpec& spec, const Matrix& x, std::span<const std::int64_t> y,
                                  std::uint64_t seed) {
    if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "row count differs from label count");
    for (double v : x.data()) {
        if (!std::isfinite(v)) throw Error(ErrorCode::BadValue, "training data contains non-finite values");
    }
    const auto enc = encode_labels(y);
    if (enc.classes.size() < 2) throw Error(ErrorCode::DegenerateClass, "training needs at least two classes");

    std::unique_ptr<Classifier> model = std::visit(
        Overloaded{
            [&](const LogRegParams& p) -> std::unique_ptr<Classifier> {
                return LogisticRegression::fit(p, x, enc, seed);
            },
            [&](const LdaParams& p) -> std::unique_ptr<Classifier> { return LinearDiscriminant::fit(p, x, y); },
            [&](const KnnParams& p) -> std::unique_ptr<Classifier> { return KNearestNeighbors::fit(p, x, enc); },
            [&](const CartParams& p) -> std::unique_ptr<Classifier> { return DecisionTree::fit(p, x, enc); },
            [&](const NaiveBayesParams& p) -> std::unique_ptr<Classifier> {
                return GaussianNaiveBayes::fit(p, x, enc);
            },
            [&](const SvmParams& p) -> std::unique_ptr<Classifier> { return SvmRbf::fit(p, x, enc); },
            [&](const DnnParams& p) -> std::unique_ptr<Classifier> {
                return DeepNeuralNetwork::fit(p, x, enc, seed);
            },
        },
        spec.params);
    model->classes_ = enc.classes;
    model->dims_ = x.cols();
    model->info_.seed = seed;
    return model;
}

double gini_impurity(std::span<const double> label_counts) {
    double total = 0.0;
    for (double c : label_counts) {
        if (c < 0.0) throw Error(ErrorCode::InvalidArgument, "negative label count");
        total += c;
    }
    if (total <= 0.0) throw Error(ErrorCode::EmptyNode, "impurity of an empty node");
    double sum_sq = 0.0;
    for (double c : label_counts) sum_sq += (c / total) * (c / total);
    return 1.0 - sum_sq;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "kernel arguments differ in length");
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-gamma * d2);
}

std::vector<double> softmax(std::span<const double> z) {
    if (z.empty()) return {};
    const double mx = *std::max_element(z.begin(), z.end());
    std::vector<double> p(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        p[i] = std::exp(z[i] - mx);
        sum += p[i];
    }
    for (auto& v : p) v /= sum;
    return p;
}

NetworkSpec build_dnn(std::size_t input_dims, std::size_t class_count, std::span<const std::size_t> hidden) {
    if (input_dims < 1) throw Error(ErrorCode::InvalidArgument, "network input width must be >= 1");
    if (class_count < 2) throw Error(ErrorCode::InvalidArgument, "network needs at least two classes");
    NetworkSpec spec;
    spec.widths.push_back(input_dims);
    spec.widths.insert(spec.widths.end(), hidden.begin(), hidden.end());
    spec.widths.push_back(class_count);
    for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        const std::size_t n = spec.widths[l] * spec.widths[l + 1] + spec.widths[l + 1];
        spec.layer_parameters.push_back(n);
        spec.parameter_count += n;
    }
    spec.trainable_parameters = spec.parameter_count;
    spec.non_trainable_parameters = 0;
    return spec;
}

NetworkSpec build_dnn(std::size_t input_dims, std::size_t class_count) {
    return build_dnn(input_dims, class_count, DnnParams{}.hidden);
}

}  // namespace touchauth
