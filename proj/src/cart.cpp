#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "model_io.hpp"
#include "touchauth/models.hpp"

namespace touchauth {

namespace {

struct SplitChoice {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double weighted = 0.0;  // n_left * gini_left + n_right * gini_right
};

/// n * gini(counts) = n - sum(c^2) / n
double scaled_gini(const std::vector<double>& counts, double n) {
    double sq = 0.0;
    for (double c : counts) sq += c * c;
    return n - sq / n;
}

bool is_pure(const std::vector<double>& counts) {
    return std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
}

/// Best Gini split over all features and midpoints between adjacent
/// distinct values. Zero-gain splits are accepted so impure nodes keep
/// splitting while any feature still separates their rows.
SplitChoice best_split(const Matrix& x, const std::vector<std::size_t>& target, const std::vector<std::size_t>& rows,
                       std::size_t n_classes, std::size_t min_leaf) {
    SplitChoice best;
    std::vector<std::pair<double, std::size_t>> sorted(rows.size());
    std::vector<double> left(n_classes), right(n_classes);
    for (std::size_t f = 0; f < x.cols(); ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i) sorted[i] = {x(rows[i], f), target[rows[i]]};
        std::sort(sorted.begin(), sorted.end());
        std::fill(left.begin(), left.end(), 0.0);
        std::fill(right.begin(), right.end(), 0.0);
        for (const auto& [_, t] : sorted) right[t] += 1.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            left[sorted[i].second] += 1.0;
            right[sorted[i].second] -= 1.0;
            const double lo = sorted[i].first;
            const double hi = sorted[i + 1].first;
            if (!(lo < hi)) continue;
            const std::size_t n_left = i + 1;
            const std::size_t n_right = sorted.size() - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;
            const double weighted =
                scaled_gini(left, static_cast<double>(n_left)) + scaled_gini(right, static_cast<double>(n_right));
            if (best.feature < 0 || weighted < best.weighted) {
                double threshold = lo + (hi - lo) / 2.0;
                if (!(threshold >= lo && threshold < hi)) threshold = lo;
                best = {static_cast<std::int32_t>(f), threshold, weighted};
            }
        }
    }
    return best;
}

}  // namespace

std::unique_ptr<DecisionTree> DecisionTree::fit(const CartParams& p, const Matrix& x, const EncodedLabels& y) {
    if (p.min_leaf < 1) throw Error(ErrorCode::InvalidArgument, "min_leaf must be >= 1");
    auto model = std::unique_ptr<DecisionTree>(new DecisionTree());
    auto& nodes = model->nodes_;
    const std::size_t n_classes = y.classes.size();

    struct Work {
        std::size_t node;
        std::size_t depth;
        std::vector<std::size_t> rows;
    };
    std::vector<Work> stack;
    {
        std::vector<std::size_t> all(x.rows());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        nodes.emplace_back();
        stack.push_back({0, 0, std::move(all)});
    }
    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        auto& counts = nodes[work.node].class_counts;
        counts.assign(n_classes, 0.0);
        for (auto r : work.rows) counts[y.index[r]] += 1.0;

        if (is_pure(counts) || (p.max_depth > 0 && work.depth >= p.max_depth) || work.rows.size() < 2 * p.min_leaf) {
            continue;
        }
        const auto split = best_split(x, y.index, work.rows, n_classes, p.min_leaf);
        if (split.feature < 0) continue;

        std::vector<std::size_t> left_rows, right_rows;
        for (auto r : work.rows) {
            (x(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left_rows : right_rows).push_back(r);
        }
        const auto left = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        const auto right = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        auto& node = nodes[work.node];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left;
        node.right = right;
        // Right pushed first so the left subtree is numbered first.
        stack.push_back({static_cast<std::size_t>(right), work.depth + 1, std::move(right_rows)});
        stack.push_back({static_cast<std::size_t>(left), work.depth + 1, std::move(left_rows)});
    }
    return model;
}

std::size_t DecisionTree::leaf_for(std::span<const double> row) const {
    std::size_t at = 0;
    while (nodes_[at].feature >= 0) {
        const auto& n = nodes_[at];
        at = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return at;
}

std::size_t DecisionTree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [at, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes_[at].feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(nodes_[at].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes_[at].right), d + 1);
        }
    }
    return deepest;
}

std::string DecisionTree::to_text() const {
    std::ostringstream os;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [at, d] = stack.back();
        stack.pop_back();
        const auto& n = nodes_[at];
        os << std::string(2 * d, ' ');
        if (n.feature >= 0) {
            os << "[" << at << "] x" << n.feature << " <= " << text::format_double(n.threshold) << '\n';
            stack.emplace_back(static_cast<std::size_t>(n.right), d + 1);
            stack.emplace_back(static_cast<std::size_t>(n.left), d + 1);
        } else {
            os << "[" << at << "] leaf";
            for (double c : n.class_counts) os << ' ' << text::format_double(c);
            os << '\n';
        }
    }
    return os.str();
}

Matrix DecisionTree::proba_impl(const Matrix& x) const {
    Matrix p(x.rows(), classes_.size());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto& counts = nodes_[leaf_for(x.row(r))].class_counts;
        double total = 0.0;
        for (double c : counts) total += c;
        for (std::size_t c = 0; c < counts.size(); ++c) p(r, c) = counts[c] / total;
    }
    return p;
}

void DecisionTree::save_state(std::ostream& out) const {
    out << "nodes " << nodes_.size() << '\n';
    for (const auto& n : nodes_) {
        out << "node " << n.feature << ' ' << text::format_double(n.threshold) << ' ' << n.left << ' ' << n.right
            << ' ' << n.class_counts.size();
        for (double c : n.class_counts) out << ' ' << text::format_double(c);
        out << '\n';
    }
}

std::unique_ptr<DecisionTree> DecisionTree::load_state(std::istream& in) {
    using namespace model_io;
    auto model = std::unique_ptr<DecisionTree>(new DecisionTree());
    model->nodes_.resize(read_scalar<std::size_t>(in, "nodes"));
    for (auto& n : model->nodes_) {
        expect(in, "node");
        n.feature = static_cast<std::int32_t>(read_int(in));
        n.threshold = read_double(in);
        n.left = static_cast<std::int32_t>(read_int(in));
        n.right = static_cast<std::int32_t>(read_int(in));
        n.class_counts.resize(read_size(in));
        for (auto& c : n.class_counts) c = read_double(in);
    }
    const auto count = static_cast<std::int32_t>(model->nodes_.size());
    for (const auto& n : model->nodes_) {
        if (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count)) {
            throw Error(ErrorCode::BadValue, "model stream: tree child index out of range");
        }
    }
    return model;
}

}  // namespace touchauth
