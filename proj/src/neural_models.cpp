#include <cmath>
#include <istream>
#include <ostream>

#include "model_io.hpp"
#include "touchauth/models.hpp"
#include "touchauth/random.hpp"

namespace touchauth {

namespace {

template <class Scalar>
typename DenseNetwork<Scalar>::Mat as_columns(const Matrix& x) {
    // Row-major n x d storage is column-major d x n.
    Eigen::Map<const Eigen::MatrixXd> view(x.data().data(), static_cast<Eigen::Index>(x.cols()),
                                           static_cast<Eigen::Index>(x.rows()));
    return view.template cast<Scalar>();
}

/// Softmax in double over network logits (columns are samples).
template <class Scalar>
Matrix probabilities(const DenseNetwork<Scalar>& net, const Matrix& x) {
    const auto z = net.logits(as_columns<Scalar>(x));
    Matrix p(x.rows(), static_cast<std::size_t>(z.rows()));
    std::vector<double> row(static_cast<std::size_t>(z.rows()));
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            row[c] = static_cast<double>(z(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)));
        }
        const auto s = softmax(row);
        std::copy(s.begin(), s.end(), p.row(r).begin());
    }
    return p;
}

template <class Scalar>
void write_block(std::ostream& out, std::string_view key, const Scalar* values, Eigen::Index n) {
    out << key << ' ' << n;
    for (Eigen::Index i = 0; i < n; ++i) {
        if constexpr (std::is_same_v<Scalar, float>) {
            out << ' ' << text::format_float(values[i]);
        } else {
            out << ' ' << text::format_double(values[i]);
        }
    }
    out << '\n';
}

template <class Scalar>
void save_network(std::ostream& out, const DenseNetwork<Scalar>& net) {
    out << "widths " << net.widths().size();
    for (auto w : net.widths()) out << ' ' << w;
    out << '\n';
    for (std::size_t l = 0; l < net.layers(); ++l) {
        out << "layer " << l << '\n';
        write_block(out, "weight", net.weight(l).data(), net.weight(l).size());
        write_block(out, "bias", net.bias(l).data(), net.bias(l).size());
    }
}

template <class Scalar>
void read_block(std::istream& in, std::string_view key, Scalar* values, Eigen::Index n) {
    model_io::expect(in, key);
    if (model_io::read_size(in) != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::BadValue, "model stream: " + std::string(key) + " block has the wrong size");
    }
    for (Eigen::Index i = 0; i < n; ++i) values[i] = static_cast<Scalar>(model_io::read_double(in));
}

template <class Scalar>
DenseNetwork<Scalar> load_network(std::istream& in) {
    using namespace model_io;
    expect(in, "widths");
    std::vector<std::size_t> widths(read_size(in));
    for (auto& w : widths) w = read_size(in);
    DenseNetwork<Scalar> net(widths, DenseNetwork<Scalar>::Init::Zero, 0);
    for (std::size_t l = 0; l < net.layers(); ++l) {
        expect(in, "layer");
        if (read_size(in) != l) throw Error(ErrorCode::BadValue, "model stream: layers out of order");
        read_block(in, "weight", net.weight(l).data(), net.weight(l).size());
        read_block(in, "bias", net.bias(l).data(), net.bias(l).size());
    }
    return net;
}

}  // namespace

std::unique_ptr<LogisticRegression> LogisticRegression::fit(const LogRegParams& p, const Matrix& x,
                                                            const EncodedLabels& y, std::uint64_t seed) {
    if (p.batch_size == 0 || !(p.learning_rate > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "logistic regression needs batch_size >= 1 and learning_rate > 0");
    }
    auto model = std::unique_ptr<LogisticRegression>(new LogisticRegression());
    model->net_ = DenseNetwork<double>({x.cols(), y.classes.size()}, DenseNetwork<double>::Init::Zero, seed);
    DenseNetwork<double>::SgdOptions opt;
    opt.learning_rate = p.learning_rate;
    opt.momentum = p.momentum;
    opt.epochs = p.epochs;
    opt.batch_size = p.batch_size;
    model->info_.loss_trace = model->net_.train_sgd(as_columns<double>(x), y.index, opt, derive_seed(seed, 1));
    model->info_.iterations = p.epochs;
    return model;
}

Matrix LogisticRegression::proba_impl(const Matrix& x) const { return probabilities(net_, x); }

void LogisticRegression::save_state(std::ostream& out) const { save_network(out, net_); }

std::unique_ptr<LogisticRegression> LogisticRegression::load_state(std::istream& in) {
    auto model = std::unique_ptr<LogisticRegression>(new LogisticRegression());
    model->net_ = load_network<double>(in);
    return model;
}

std::unique_ptr<DeepNeuralNetwork> DeepNeuralNetwork::fit(const DnnParams& p, const Matrix& x, const EncodedLabels& y,
                                                          std::uint64_t seed) {
    if (p.batch_size == 0 || !(p.learning_rate > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "network needs batch_size >= 1 and learning_rate > 0");
    }
    for (auto w : p.hidden) {
        if (w == 0) throw Error(ErrorCode::InvalidArgument, "hidden layer width must be >= 1");
    }
    const auto spec = build_dnn(x.cols(), y.classes.size(), p.hidden);
    auto model = std::unique_ptr<DeepNeuralNetwork>(new DeepNeuralNetwork());
    model->net_ = DenseNetwork<float>(spec.widths, DenseNetwork<float>::Init::HeUniform, derive_seed(seed, 0));
    DenseNetwork<float>::SgdOptions opt;
    opt.learning_rate = static_cast<float>(p.learning_rate);
    opt.momentum = static_cast<float>(p.momentum);
    opt.epochs = p.epochs;
    opt.batch_size = p.batch_size;
    model->info_.loss_trace = model->net_.train_sgd(as_columns<float>(x), y.index, opt, derive_seed(seed, 1));
    model->info_.iterations = p.epochs;
    const double last = model->info_.loss_trace.back();
    if (!std::isfinite(last)) {
        model->info_.converged = false;
        model->info_.warnings.push_back("training loss diverged");
    }
    return model;
}

Matrix DeepNeuralNetwork::proba_impl(const Matrix& x) const { return probabilities(net_, x); }

void DeepNeuralNetwork::save_state(std::ostream& out) const { save_network(out, net_); }

std::unique_ptr<DeepNeuralNetwork> DeepNeuralNetwork::load_state(std::istream& in) {
    auto model = std::unique_ptr<DeepNeuralNetwork>(new DeepNeuralNetwork());
    model->net_ = load_network<float>(in);
    return model;
}

}  // namespace touchauth
