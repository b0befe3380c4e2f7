#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "touchauth/classifiers.hpp"
#include "touchauth/dataset.hpp"

namespace touchauth {

/// Fraction of positions where predicted equals actual.
/// Throws LengthMismatch, or EmptyInput for empty sequences.
double accuracy(std::span<const std::int64_t> predicted, std::span<const std::int64_t> actual);

struct ConfusionMatrix {
    std::vector<std::int64_t> classes;
    std::vector<std::vector<std::size_t>> counts;  // [actual][predicted]

    std::size_t total() const;
    std::size_t trace() const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws UnknownLabel when a label is missing from `classes`.
ConfusionMatrix confusion_matrix(std::span<const std::int64_t> predicted, std::span<const std::int64_t> actual,
                                 std::span<const std::int64_t> classes);

struct EerResult {
    double eer = 0.0;
    double threshold = 0.0;
};

/// Higher scores mean "more genuine". Candidate thresholds are the observed
/// scores; FAR(t) = share of impostors >= t, FRR(t) = share of genuine < t.
/// Picks the lowest threshold minimising |FAR - FRR| and reports their mean.
/// Throws EmptyScores.
EerResult compute_eer(std::span<const double> genuine, std::span<const double> impostor);

struct UserEer {
    std::int64_t user = 0;
    double eer = 0.0;
    double threshold = 0.0;
};

/// One-vs-rest EER per class column of `proba`; classes lacking genuine or
/// impostor rows are skipped.
std::vector<UserEer> per_user_eer(const Matrix& proba, std::span<const std::int64_t> classes,
                                  std::span<const std::int64_t> actual);

struct Protocol {
    enum class Kind { Holdout, KFold };
    Kind kind = Kind::Holdout;
    double test_fraction = 0.2;
    std::size_t folds = 5;
    std::uint64_t seed = 42;
    bool standardize = true;
};

struct EvalReport {
    ClassifierSpec spec;
    bool ok = false;
    std::string error;
    double accuracy = 0.0;
    ConfusionMatrix confusion;
    std::vector<UserEer> user_eer;
    double mean_eer = 0.0;  // macro average over user_eer
    std::vector<std::string> warnings;
    std::vector<std::vector<double>> loss_traces;  // one per split; empty for non-iterative kinds
    double train_seconds = 0.0;
    double predict_seconds = 0.0;
};

struct BenchmarkReport {
    Protocol protocol;
    std::vector<std::string> schema;                // input columns before masking
    std::optional<std::vector<std::string>> mask;   // selected columns, if masked
    std::size_t rows = 0;
    std::size_t test_rows = 0;
    std::vector<std::int64_t> classes;
    std::vector<EvalReport> results;                // in spec order
};

/// Keeps the named columns of `m`, in `m`'s column order. Throws
/// MissingColumn for unknown names.
FeatureMatrix apply_mask(const FeatureMatrix& m, std::span<const std::string> names);

/// Trains and scores every spec on one shared split (or fold set) of the
/// optionally masked matrix; standardisation is fitted on training rows only.
/// A failing spec is recorded in its report and does not stop the others.
BenchmarkReport run_benchmark(const FeatureMatrix& m, std::span<const ClassifierSpec> specs,
                              const Protocol& protocol,
                              const std::optional<std::vector<std::string>>& mask = std::nullopt);

/// Machine-readable report. Timings are left out unless requested so that
/// repeated runs produce identical files.
nlohmann::ordered_json to_json(const BenchmarkReport& report, bool include_timings = false);

/// Accuracy table (percent, two decimals): one row per classifier in table
/// order, one column per labelled report.
std::string format_accuracy_table(std::span<const std::pair<std::string, const BenchmarkReport*>> columns);

/// `classifier,<label>...` accuracies in percent for grouped bar charts.
std::string write_series_csv(std::span<const std::pair<std::string, const BenchmarkReport*>> columns,
                             std::string_view comment_block = {});

/// `classifier,split,epoch,loss` for every recorded loss trace; epoch 0 is
/// the loss before training.
std::string write_loss_trace_csv(const BenchmarkReport& report, std::string_view comment_block = {});

}  // namespace touchauth
