#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "touchauth/error.hpp"
#include "touchauth/random.hpp"

namespace touchauth {

/// Fully connected feed-forward network: ReLU hidden layers, softmax output,
/// mean cross-entropy loss. Samples are columns.
template <class Scalar>
class DenseNetwork {
public:
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    enum class Init { Zero, HeUniform };

    DenseNetwork() = default;

    DenseNetwork(std::vector<std::size_t> widths, Init init, std::uint64_t seed) : widths_(std::move(widths)) {
        if (widths_.size() < 2) throw Error(ErrorCode::InvalidArgument, "network needs input and output widths");
        Rng rng(seed);
        for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
            const auto in = static_cast<Eigen::Index>(widths_[l]);
            const auto out = static_cast<Eigen::Index>(widths_[l + 1]);
            Mat w = Mat::Zero(out, in);
            if (init == Init::HeUniform) {
                const double limit = std::sqrt(6.0 / static_cast<double>(in));
                for (Eigen::Index j = 0; j < in; ++j) {
                    for (Eigen::Index i = 0; i < out; ++i) {
                        w(i, j) = static_cast<Scalar>((2.0 * uniform01(rng) - 1.0) * limit);
                    }
                }
            }
            weights_.push_back(std::move(w));
            biases_.push_back(Vec::Zero(out));
        }
    }

    const std::vector<std::size_t>& widths() const noexcept { return widths_; }
    std::size_t layers() const noexcept { return weights_.size(); }
    const Mat& weight(std::size_t l) const { return weights_[l]; }
    const Vec& bias(std::size_t l) const { return biases_[l]; }
    Mat& weight(std::size_t l) { return weights_[l]; }
    Vec& bias(std::size_t l) { return biases_[l]; }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l < layers(); ++l) n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
        return n;
    }

    /// Flat parameter vector: per layer, W (column-major) then b.
    std::vector<Scalar> parameters() const {
        std::vector<Scalar> flat;
        flat.reserve(parameter_count());
        for (std::size_t l = 0; l < layers(); ++l) {
            flat.insert(flat.end(), weights_[l].data(), weights_[l].data() + weights_[l].size());
            flat.insert(flat.end(), biases_[l].data(), biases_[l].data() + biases_[l].size());
        }
        return flat;
    }

    void set_parameters(std::span<const Scalar> flat) {
        if (flat.size() != parameter_count()) throw Error(ErrorCode::LengthMismatch, "parameter vector length");
        std::size_t at = 0;
        for (std::size_t l = 0; l < layers(); ++l) {
            std::copy_n(flat.data() + at, weights_[l].size(), weights_[l].data());
            at += static_cast<std::size_t>(weights_[l].size());
            std::copy_n(flat.data() + at, biases_[l].size(), biases_[l].data());
            at += static_cast<std::size_t>(biases_[l].size());
        }
    }

    /// Output-layer pre-activations for a batch (inputs as columns).
    Mat logits(const Mat& inputs) const {
        Mat a = inputs;
        for (std::size_t l = 0; l < layers(); ++l) {
            Mat z = weights_[l] * a;
            z.colwise() += biases_[l];
            if (l + 1 < layers()) z = z.cwiseMax(Scalar(0));
            a = std::move(z);
        }
        return a;
    }

    /// Column-wise softmax of logits.
    static Mat softmax_columns(const Mat& z) {
        Mat p(z.rows(), z.cols());
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            const Scalar mx = z.col(c).maxCoeff();
            p.col(c) = (z.col(c).array() - mx).exp().matrix();
            p.col(c) /= p.col(c).sum();
        }
        return p;
    }

    /// Mean cross-entropy of a batch; `targets` are class indices per column.
    Scalar loss(const Mat& inputs, std::span<const std::size_t> targets) const {
        const Mat z = logits(inputs);
        Scalar total = 0;
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            const Scalar mx = z.col(c).maxCoeff();
            const Scalar lse = mx + std::log((z.col(c).array() - mx).exp().sum());
            total += lse - z(static_cast<Eigen::Index>(targets[static_cast<std::size_t>(c)]), c);
        }
        return total / static_cast<Scalar>(z.cols());
    }

    struct Gradient {
        std::vector<Mat> weights;
        std::vector<Vec> biases;
        Scalar loss = 0;
    };

    /// Backpropagation of the mean cross-entropy over the batch.
    Gradient gradient(const Mat& inputs, std::span<const std::size_t> targets) const {
        const auto batch = inputs.cols();
        std::vector<Mat> activations;
        activations.reserve(layers() + 1);
        activations.push_back(inputs);
        for (std::size_t l = 0; l < layers(); ++l) {
            Mat z = weights_[l] * activations.back();
            z.colwise() += biases_[l];
            if (l + 1 < layers()) z = z.cwiseMax(Scalar(0));
            activations.push_back(std::move(z));
        }

        Gradient g;
        g.weights.resize(layers());
        g.biases.resize(layers());
        Mat delta = softmax_columns(activations.back());
        Scalar total = 0;
        for (Eigen::Index c = 0; c < batch; ++c) {
            const auto t = static_cast<Eigen::Index>(targets[static_cast<std::size_t>(c)]);
            total -= std::log(std::max(delta(t, c), std::numeric_limits<Scalar>::min()));
            delta(t, c) -= Scalar(1);
        }
        g.loss = total / static_cast<Scalar>(batch);
        delta /= static_cast<Scalar>(batch);

        for (std::size_t l = layers(); l-- > 0;) {
            g.weights[l].noalias() = delta * activations[l].transpose();
            g.biases[l] = delta.rowwise().sum();
            if (l > 0) {
                Mat back = weights_[l].transpose() * delta;
                // ReLU derivative: activations[l] holds max(z, 0).
                delta = (activations[l].array() > Scalar(0)).select(back, Scalar(0));
            }
        }
        return g;
    }

    /// Flattened gradient in the order of parameters().
    std::vector<Scalar> flat_gradient(const Mat& inputs, std::span<const std::size_t> targets) const {
        const auto g = gradient(inputs, targets);
        std::vector<Scalar> flat;
        flat.reserve(parameter_count());
        for (std::size_t l = 0; l < layers(); ++l) {
            flat.insert(flat.end(), g.weights[l].data(), g.weights[l].data() + g.weights[l].size());
            flat.insert(flat.end(), g.biases[l].data(), g.biases[l].data() + g.biases[l].size());
        }
        return flat;
    }

    struct SgdOptions {
        Scalar learning_rate = Scalar(0.01);
        Scalar momentum = Scalar(0.9);
        std::size_t epochs = 50;
        std::size_t batch_size = 32;
    };

    /// Mini-batch SGD with momentum. Returns the loss trace: full-data loss
    /// before training, then the mean mini-batch loss of each epoch.
    std::vector<double> train_sgd(const Mat& inputs, std::span<const std::size_t> targets, const SgdOptions& opt,
                                  std::uint64_t seed) {
        const auto n = static_cast<std::size_t>(inputs.cols());
        std::vector<double> trace;
        trace.push_back(static_cast<double>(loss(inputs, targets)));
        if (n == 0 || opt.batch_size == 0) return trace;

        std::vector<Mat> vw(layers());
        std::vector<Vec> vb(layers());
        for (std::size_t l = 0; l < layers(); ++l) {
            vw[l] = Mat::Zero(weights_[l].rows(), weights_[l].cols());
            vb[l] = Vec::Zero(biases_[l].size());
        }
        Rng rng(seed);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        Mat batch;
        std::vector<std::size_t> batch_targets;

        for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
            shuffle(order.begin(), order.end(), rng);
            double epoch_loss = 0.0;
            for (std::size_t start = 0; start < n; start += opt.batch_size) {
                const std::size_t size = std::min(opt.batch_size, n - start);
                batch.resize(inputs.rows(), static_cast<Eigen::Index>(size));
                batch_targets.resize(size);
                for (std::size_t i = 0; i < size; ++i) {
                    batch.col(static_cast<Eigen::Index>(i)) = inputs.col(static_cast<Eigen::Index>(order[start + i]));
                    batch_targets[i] = targets[order[start + i]];
                }
                const auto g = gradient(batch, batch_targets);
                epoch_loss += static_cast<double>(g.loss) * static_cast<double>(size);
                for (std::size_t l = 0; l < layers(); ++l) {
                    vw[l] = opt.momentum * vw[l] - opt.learning_rate * g.weights[l];
                    vb[l] = opt.momentum * vb[l] - opt.learning_rate * g.biases[l];
                    weights_[l] += vw[l];
                    biases_[l] += vb[l];
                }
            }
            trace.push_back(epoch_loss / static_cast<double>(n));
        }
        return trace;
    }

private:
    std::vector<std::size_t> widths_;
    std::vector<Mat> weights_;
    std::vector<Vec> biases_;
};

}  // namespace touchauth
