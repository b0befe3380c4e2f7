#include "touchauth/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "touchauth/error.hpp"
#include "touchauth/random.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth {

double accuracy(std::span<const std::int64_t> predicted, std::span<const std::int64_t> actual) {
    if (predicted.size() != actual.size()) throw Error(ErrorCode::LengthMismatch, "prediction count differs");
    if (predicted.empty()) throw Error(ErrorCode::EmptyInput, "accuracy of no predictions");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == actual[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

std::size_t ConfusionMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : counts) {
        for (auto c : row) n += c;
    }
    return n;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
    return n;
}

ConfusionMatrix confusion_matrix(std::span<const std::int64_t> predicted, std::span<const std::int64_t> actual,
                                 std::span<const std::int64_t> classes) {
    if (predicted.size() != actual.size()) throw Error(ErrorCode::LengthMismatch, "prediction count differs");
    ConfusionMatrix cm;
    cm.classes.assign(classes.begin(), classes.end());
    cm.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
    auto index_of = [&](std::int64_t label) {
        auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end()) throw Error(ErrorCode::UnknownLabel, "label " + std::to_string(label) + " not in class list");
        return static_cast<std::size_t>(it - classes.begin());
    };
    for (std::size_t i = 0; i < predicted.size(); ++i) ++cm.counts[index_of(actual[i])][index_of(predicted[i])];
    return cm;
}

EerResult compute_eer(std::span<const double> genuine, std::span<const double> impostor) {
    if (genuine.empty() || impostor.empty()) throw Error(ErrorCode::EmptyScores, "EER needs genuine and impostor scores");
    std::vector<double> g(genuine.begin(), genuine.end());
    std::vector<double> im(impostor.begin(), impostor.end());
    std::sort(g.begin(), g.end());
    std::sort(im.begin(), im.end());
    std::vector<double> thresholds;
    thresholds.reserve(g.size() + im.size());
    std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(thresholds));
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double ng = static_cast<double>(g.size());
    const double ni = static_cast<double>(im.size());
    EerResult best;
    double best_gap = std::numeric_limits<double>::infinity();
    std::size_t genuine_below = 0;   // genuine scores < t
    std::size_t impostor_below = 0;  // impostor scores < t
    for (double t : thresholds) {
        while (genuine_below < g.size() && g[genuine_below] < t) ++genuine_below;
        while (impostor_below < im.size() && im[impostor_below] < t) ++impostor_below;
        const double far = static_cast<double>(im.size() - impostor_below) / ni;
        const double frr = static_cast<double>(genuine_below) / ng;
        const double gap = std::abs(far - frr);
        if (gap < best_gap) {
            best_gap = gap;
            best = {(far + frr) / 2.0, t};
        }
    }
    return best;
}

std::vector<UserEer> per_user_eer(const Matrix& proba, std::span<const std::int64_t> classes,
                                  std::span<const std::int64_t> actual) {
    if (proba.rows() != actual.size() || proba.cols() != classes.size()) {
        throw Error(ErrorCode::DimensionMismatch, "probability matrix shape differs from labels");
    }
    std::vector<UserEer> out;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        std::vector<double> genuine, impostor;
        for (std::size_t r = 0; r < actual.size(); ++r) (actual[r] == classes[k] ? genuine : impostor).push_back(proba(r, k));
        if (genuine.empty() || impostor.empty()) continue;
        const auto e = compute_eer(genuine, impostor);
        out.push_back({classes[k], e.eer, e.threshold});
    }
    return out;
}

FeatureMatrix apply_mask(const FeatureMatrix& m, std::span<const std::string> names) {
    std::vector<std::size_t> columns;
    for (const auto& name : names) {
        auto it = std::find(m.schema.begin(), m.schema.end(), name);
        if (it == m.schema.end()) throw Error(ErrorCode::MissingColumn, "mask names unknown feature '" + name + "'");
        columns.push_back(static_cast<std::size_t>(it - m.schema.begin()));
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    return m.select_columns(columns);
}

namespace {

struct PreparedSplit {
    Matrix train;
    Matrix test;
    std::vector<std::int64_t> y_train;
    std::vector<std::int64_t> y_test;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BenchmarkReport run_benchmark(const FeatureMatrix& input, std::span<const ClassifierSpec> specs,
                              const Protocol& protocol, const std::optional<std::vector<std::string>>& mask) {
    if (specs.empty()) throw Error(ErrorCode::InvalidArgument, "no classifiers to benchmark");
    input.validate();
    BenchmarkReport report;
    report.protocol = protocol;
    report.schema = input.schema;
    report.rows = input.size();
    const FeatureMatrix m = mask ? apply_mask(input, *mask) : input;
    if (mask) report.mask = m.schema;
    report.classes = m.classes();

    std::vector<Split> splits;
    if (protocol.kind == Protocol::Kind::Holdout) {
        splits.push_back(stratified_split(m, protocol.test_fraction, protocol.seed));
    } else {
        splits = k_fold(m, protocol.folds, protocol.seed);
    }

    std::vector<PreparedSplit> prepared;
    for (const auto& split : splits) {
        PreparedSplit p;
        p.train = m.rows.select_rows(split.train);
        p.test = m.rows.select_rows(split.test);
        if (protocol.standardize) {
            auto scaled = standardize(p.train);
            p.test = scaled.transform.transform(p.test);
            p.train = std::move(scaled.rows);
        }
        for (auto i : split.train) p.y_train.push_back(m.labels[i]);
        for (auto i : split.test) p.y_test.push_back(m.labels[i]);
        report.test_rows += p.y_test.size();
        prepared.push_back(std::move(p));
    }

    for (const auto& spec : specs) {
        EvalReport r;
        r.spec = spec;
        try {
            std::vector<std::int64_t> predicted, actual;
            Matrix proba(0, report.classes.size());
            for (std::size_t s = 0; s < prepared.size(); ++s) {
                const auto& p = prepared[s];
                auto start = Clock::now();
                const auto model = train(spec, p.train, p.y_train, derive_seed(protocol.seed, s));
                r.train_seconds += seconds_since(start);
                for (const auto& w : model->info().warnings) r.warnings.push_back(w);
                if (!model->info().loss_trace.empty()) r.loss_traces.push_back(model->info().loss_trace);

                start = Clock::now();
                const auto labels = model->predict(p.test);
                const auto fold_proba = model->predict_proba(p.test);
                r.predict_seconds += seconds_since(start);
                predicted.insert(predicted.end(), labels.begin(), labels.end());
                actual.insert(actual.end(), p.y_test.begin(), p.y_test.end());

                // Fold models may see a subset of classes; align columns to the report's class list.
                const auto& model_classes = model->classes();
                for (std::size_t row = 0; row < fold_proba.rows(); ++row) {
                    std::vector<double> aligned(report.classes.size(), 0.0);
                    for (std::size_t c = 0; c < model_classes.size(); ++c) {
                        const auto at = std::lower_bound(report.classes.begin(), report.classes.end(), model_classes[c]);
                        aligned[static_cast<std::size_t>(at - report.classes.begin())] = fold_proba(row, c);
                    }
                    proba.append_row(aligned);
                }
            }
            r.confusion = confusion_matrix(predicted, actual, report.classes);
            r.accuracy = static_cast<double>(r.confusion.trace()) / static_cast<double>(r.confusion.total());
            r.user_eer = per_user_eer(proba, report.classes, actual);
            double sum = 0.0;
            for (const auto& u : r.user_eer) sum += u.eer;
            r.mean_eer = r.user_eer.empty() ? 0.0 : sum / static_cast<double>(r.user_eer.size());
            r.ok = true;
        } catch (const std::exception& e) {
            r.ok = false;
            r.error = e.what();
        }
        report.results.push_back(std::move(r));
    }
    return report;
}

nlohmann::ordered_json to_json(const BenchmarkReport& report, bool include_timings) {
    using nlohmann::ordered_json;
    ordered_json j;
    ordered_json proto;
    proto["split"] = report.protocol.kind == Protocol::Kind::Holdout ? "stratified_holdout" : "stratified_kfold";
    if (report.protocol.kind == Protocol::Kind::Holdout) {
        proto["test_fraction"] = report.protocol.test_fraction;
    } else {
        proto["folds"] = report.protocol.folds;
    }
    proto["seed"] = report.protocol.seed;
    proto["standardize"] = report.protocol.standardize ? "train_only" : "none";
    proto["schema"] = report.schema;
    proto["mask"] = report.mask ? ordered_json(*report.mask) : ordered_json(nullptr);
    proto["rows"] = report.rows;
    proto["test_rows"] = report.test_rows;
    proto["classes"] = report.classes;
    j["protocol"] = proto;

    ordered_json results = ordered_json::array();
    for (const auto& r : report.results) {
        ordered_json e;
        e["classifier"] = short_name(r.spec.kind());
        e["name"] = display_name(r.spec.kind());
        e["hyperparameters"] = r.spec.describe();
        e["ok"] = r.ok;
        if (!r.ok) {
            e["error"] = r.error;
        } else {
            e["accuracy"] = r.accuracy;
            e["mean_eer"] = r.mean_eer;
            ordered_json users = ordered_json::array();
            for (const auto& u : r.user_eer) users.push_back({{"user", u.user}, {"eer", u.eer}, {"threshold", u.threshold}});
            e["user_eer"] = users;
            e["confusion"] = r.confusion.counts;
            e["warnings"] = r.warnings;
        }
        if (include_timings) {
            e["train_seconds"] = r.train_seconds;
            e["predict_seconds"] = r.predict_seconds;
        }
        results.push_back(std::move(e));
    }
    j["results"] = results;
    return j;
}

namespace {

const EvalReport* find_result(const BenchmarkReport& report, ClassifierKind kind) {
    for (const auto& r : report.results) {
        if (r.spec.kind() == kind) return &r;
    }
    return nullptr;
}

std::string percent(double fraction) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << fraction * 100.0;
    return os.str();
}

}  // namespace

std::string format_accuracy_table(std::span<const std::pair<std::string, const BenchmarkReport*>> columns) {
    std::size_t name_width = 10;
    for (auto kind : kAllClassifierKinds) name_width = std::max(name_width, display_name(kind).size());
    std::vector<std::size_t> widths;
    for (const auto& [label, _] : columns) widths.push_back(std::max<std::size_t>(label.size(), 8));

    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(name_width)) << "Classifier";
    for (std::size_t c = 0; c < columns.size(); ++c) {
        os << "  " << std::right << std::setw(static_cast<int>(widths[c])) << columns[c].first;
    }
    os << '\n';
    for (auto kind : kAllClassifierKinds) {
        bool present = false;
        for (const auto& [_, report] : columns) present = present || find_result(*report, kind);
        if (!present) continue;
        os << std::left << std::setw(static_cast<int>(name_width)) << display_name(kind);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const auto* r = find_result(*columns[c].second, kind);
            const std::string cell = !r ? "-" : (r->ok ? percent(r->accuracy) : "failed");
            os << "  " << std::right << std::setw(static_cast<int>(widths[c])) << cell;
        }
        os << '\n';
    }
    return os.str();
}

std::string write_series_csv(std::span<const std::pair<std::string, const BenchmarkReport*>> columns,
                             std::string_view comment_block) {
    std::string out(comment_block);
    out += "classifier";
    for (const auto& [label, _] : columns) out += ',' + label;
    out += '\n';
    for (auto kind : kAllClassifierKinds) {
        bool present = false;
        for (const auto& [_, report] : columns) present = present || find_result(*report, kind);
        if (!present) continue;
        out += short_name(kind);
        for (const auto& [_, report] : columns) {
            const auto* r = find_result(*report, kind);
            out += ',';
            if (r && r->ok) out += percent(r->accuracy);
        }
        out += '\n';
    }
    return out;
}

std::string write_loss_trace_csv(const BenchmarkReport& report, std::string_view comment_block) {
    std::string out(comment_block);
    out += "classifier,split,epoch,loss\n";
    for (const auto& r : report.results) {
        for (std::size_t s = 0; s < r.loss_traces.size(); ++s) {
            const auto& trace = r.loss_traces[s];
            for (std::size_t e = 0; e < trace.size(); ++e) {
                out += std::string(short_name(r.spec.kind())) + ',' + std::to_string(s) + ',' + std::to_string(e) +
                       ',' + text::format_double(trace[e]) + '\n';
            }
        }
    }
    return out;
}

}  // namespace touchauth
