#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "touchauth/classifiers.hpp"
#include "touchauth/dataset.hpp"
#include "touchauth/error.hpp"
#include "touchauth/eval.hpp"
#include "touchauth/features.hpp"
#include "touchauth/ga.hpp"
#include "touchauth/ingest.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input failure tied to a file; the message names the file.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KeyKind { Size, U64, Double, Bool, Text, Path, ClassifierList, SizeList, OptionalDouble };

struct KeySpec {
    std::string name;
    KeyKind kind;
    std::string default_value;
    std::string help;
};

std::string canonical(const KeySpec& key, std::string_view raw) {
    const auto value = text::trim(raw);
    auto bad = [&]() -> UsageError {
        return UsageError("invalid value '" + std::string(value) + "' for " + key.name);
    };
    switch (key.kind) {
        case KeyKind::Size:
        case KeyKind::U64: {
            const auto v = text::parse_int(value);
            if (!v || *v < 0) throw bad();
            return std::to_string(*v);
        }
        case KeyKind::Double: {
            const auto v = text::parse_double(value);
            if (!v || !std::isfinite(*v)) throw bad();
            return text::format_double(*v);
        }
        case KeyKind::OptionalDouble: {
            if (value == "auto" || value.empty()) return "auto";
            const auto v = text::parse_double(value);
            if (!v || !std::isfinite(*v)) throw bad();
            return text::format_double(*v);
        }
        case KeyKind::Bool:
            if (value == "true" || value == "1" || value == "yes" || value == "on") return "true";
            if (value == "false" || value == "0" || value == "no" || value == "off") return "false";
            throw bad();
        case KeyKind::Text:
        case KeyKind::Path:
            return std::string(value);
        case KeyKind::ClassifierList: {
            if (value == "all") return "all";
            std::vector<std::string> names;
            for (auto field : text::split_fields(value)) {
                const auto name = text::trim(field);
                if (!kind_from_short_name(name)) throw bad();
                if (std::find(names.begin(), names.end(), name) == names.end()) names.emplace_back(name);
            }
            if (names.empty()) throw bad();
            std::string out;
            for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
            return out;
        }
        case KeyKind::SizeList: {
            std::string out;
            for (auto field : text::split_fields(value)) {
                const auto v = text::parse_int(text::trim(field));
                if (!v || *v <= 0) throw bad();
                out += (out.empty() ? "" : ",") + std::to_string(*v);
            }
            if (out.empty()) throw bad();
            return out;
        }
    }
    throw bad();
}

std::vector<KeySpec> hyperparameter_keys() {
    return {
        {"lr_learning_rate", KeyKind::Double, "0.1", "logistic regression step size"},
        {"lr_epochs", KeyKind::Size, "100", "logistic regression epochs"},
        {"lr_batch_size", KeyKind::Size, "32", "logistic regression batch size"},
        {"lda_shrinkage", KeyKind::Double, "0.001", "LDA covariance shrinkage"},
        {"knn_k", KeyKind::Size, "5", "neighbours for kNN"},
        {"cart_max_depth", KeyKind::Size, "0", "CART depth cap (0 = none)"},
        {"cart_min_leaf", KeyKind::Size, "1", "CART minimum rows per leaf"},
        {"nb_variance_floor", KeyKind::Double, "1e-9", "naive Bayes variance floor"},
        {"svm_c", KeyKind::Double, "1", "SVM box constraint"},
        {"svm_gamma", KeyKind::Double, "0", "RBF gamma (0 = 1/d)"},
        {"svm_tolerance", KeyKind::Double, "0.001", "SMO stopping tolerance"},
        {"svm_max_iterations", KeyKind::Size, "10000", "SMO iteration cap per class"},
        {"dnn_hidden", KeyKind::SizeList, "3000,1000,300", "DNN hidden widths"},
        {"dnn_learning_rate", KeyKind::Double, "0.01", "DNN step size"},
        {"dnn_epochs", KeyKind::Size, "50", "DNN epochs"},
        {"dnn_batch_size", KeyKind::Size, "32", "DNN batch size"},
    };
}

std::vector<KeySpec> command_keys(std::string_view command) {
    std::vector<KeySpec> keys;
    if (command == "synth") {
        keys = {
            {"users", KeyKind::Size, "5", "number of synthetic users"},
            {"strokes", KeyKind::Size, "100", "strokes per user"},
            {"seed", KeyKind::U64, "42", "random seed"},
            {"out", KeyKind::Path, "", "raw event CSV to write"},
        };
    } else if (command == "extract") {
        keys = {
            {"input", KeyKind::Path, "", "raw event CSV"},
            {"out", KeyKind::Path, "", "feature CSV to write"},
            {"schema", KeyKind::Text, "default", "feature schema name"},
        };
    } else if (command == "correlate") {
        keys = {
            {"input", KeyKind::Path, "", "feature CSV"},
            {"out", KeyKind::Path, "", "correlation CSV to write"},
        };
    } else if (command == "select") {
        keys = {
            {"input", KeyKind::Path, "", "feature CSV"},
            {"out", KeyKind::Path, "", "mask file to write"},
            {"trace", KeyKind::Path, "", "generation trace CSV (default: next to the mask)"},
            {"seed", KeyKind::U64, "42", "random seed"},
            {"population", KeyKind::Size, "30", "population size"},
            {"generations", KeyKind::Size, "10", "generations"},
            {"tournament", KeyKind::Size, "2", "tournament size"},
            {"crossover_rate", KeyKind::Double, "0.9", "crossover probability"},
            {"mutation_rate", KeyKind::OptionalDouble, "auto", "per-gene flip probability (auto = 1/d)"},
            {"elitism", KeyKind::Size, "2", "elite chromosomes copied per generation"},
            {"wrapper", KeyKind::Text, "cart", "classifier scoring each mask"},
            {"folds", KeyKind::Size, "3", "cross-validation folds per fitness evaluation"},
            {"parsimony", KeyKind::Double, "0", "penalty per selected fraction of features"},
            {"threads", KeyKind::Size, "1", "fitness worker threads"},
        };
    } else if (command == "benchmark") {
        keys = {
            {"input", KeyKind::Path, "", "feature CSV"},
            {"out", KeyKind::Path, "", "JSON report to write"},
            {"table", KeyKind::Path, "", "accuracy table (default: next to the report)"},
            {"series", KeyKind::Path, "", "grouped-bar CSV (default: next to the report)"},
            {"loss_trace", KeyKind::Path, "", "per-epoch training loss CSV (default: next to the report)"},
            {"classifiers", KeyKind::ClassifierList, "all", "comma list of lr,lda,knn,cart,nb,svm,dnn"},
            {"mask", KeyKind::Path, "", "mask file restricting the features"},
            {"test_fraction", KeyKind::Double, "0.2", "held-out share per class"},
            {"folds", KeyKind::Size, "0", "k-fold cross-validation instead of a holdout when >= 2"},
            {"seed", KeyKind::U64, "42", "random seed"},
            {"standardize", KeyKind::Bool, "true", "z-score features using training rows"},
            {"dataset_label", KeyKind::Text, "extracted", "column label in the table and series"},
            {"timings", KeyKind::Bool, "false", "record wall-clock timings in the report"},
        };
    }
    if (command == "select" || command == "benchmark") {
        auto extra = hyperparameter_keys();
        keys.insert(keys.end(), extra.begin(), extra.end());
    }
    return keys;
}

std::string flag_name(std::string_view key) {
    std::string flag(key);
    std::replace(flag.begin(), flag.end(), '_', '-');
    return "--" + flag;
}

std::string derived_path(const std::string& base, std::string_view suffix) {
    fs::path p(base);
    p.replace_extension();
    return p.string() + std::string(suffix);
}

std::string read_input(const std::string& path) {
    try {
        return text::read_file(path);
    } catch (const std::exception& e) {
        throw InputError(path + ": cannot read file");
    }
}

void write_output(const std::string& path, std::string_view contents) {
    text::write_file_atomic(path, contents);
}

// Runs `fn` and prefixes library errors with the file being parsed.
template <class Fn>
auto parse_file(const std::string& path, Fn fn) {
    const auto source = read_input(path);
    try {
        return fn(source);
    } catch (const Error& e) {
        throw InputError(path + ": " + e.what());
    }
}

ClassifierSpec spec_for(ClassifierKind kind, const RunConfig& cfg) {
    switch (kind) {
        case ClassifierKind::LogReg: {
            LogRegParams p;
            p.learning_rate = cfg.get_double("lr_learning_rate");
            p.epochs = cfg.get_size("lr_epochs");
            p.batch_size = cfg.get_size("lr_batch_size");
            return {p};
        }
        case ClassifierKind::LDA:
            return {LdaParams{cfg.get_double("lda_shrinkage")}};
        case ClassifierKind::KNN:
            return {KnnParams{cfg.get_size("knn_k")}};
        case ClassifierKind::CART:
            return {CartParams{cfg.get_size("cart_max_depth"), cfg.get_size("cart_min_leaf")}};
        case ClassifierKind::GaussianNB:
            return {NaiveBayesParams{cfg.get_double("nb_variance_floor")}};
        case ClassifierKind::SvmRbf: {
            SvmParams p;
            p.c = cfg.get_double("svm_c");
            p.gamma = cfg.get_double("svm_gamma");
            p.tolerance = cfg.get_double("svm_tolerance");
            p.max_iterations = cfg.get_size("svm_max_iterations");
            return {p};
        }
        case ClassifierKind::DNN: {
            DnnParams p;
            p.hidden.clear();
            for (auto field : text::split_fields(cfg.get("dnn_hidden"))) {
                p.hidden.push_back(static_cast<std::size_t>(*text::parse_int(field)));
            }
            p.learning_rate = cfg.get_double("dnn_learning_rate");
            p.epochs = cfg.get_size("dnn_epochs");
            p.batch_size = cfg.get_size("dnn_batch_size");
            return {p};
        }
    }
    throw UsageError("unknown classifier");
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
    SyntheticOptions options;
    options.n_users = cfg.get_size("users");
    options.strokes_per_user = cfg.get_size("strokes");
    options.seed = cfg.get_u64("seed");
    if (options.n_users < 2) throw UsageError("users must be at least 2");
    if (options.strokes_per_user < 1) throw UsageError("strokes must be at least 1");
    const auto events = generate_synthetic_users(options);
    write_output(cfg.get("out"), cfg.comment_block() + write_raw_events(events));
    out << "wrote " << events.size() << " events for " << options.n_users << " users to " << cfg.get("out")
        << '\n';
    return kOk;
}

std::string_view skip_reason_name(SkipReason reason) {
    return reason == SkipReason::DegenerateStroke ? "degenerate stroke" : "non-finite feature";
}

int cmd_extract(const RunConfig& cfg, std::ostream& out) {
    if (cfg.get("schema") != "default") throw UsageError("unknown feature schema '" + cfg.get("schema") + "'");
    const auto& input = cfg.get("input");
    const auto events = parse_file(input, [](const std::string& s) { return parse_raw_events(s); });
    const auto segmentation = segment_strokes(events);
    const auto schema = default_schema();
    const auto result = extract_dataset(segmentation.strokes, schema);
    if (result.matrix.size() == 0) throw InputError(input + ": no usable strokes");
    write_output(cfg.get("out"), write_feature_csv(result.matrix, cfg.comment_block()));

    out << segmentation.report.to_text();
    out << "strokes accepted: " << result.matrix.size() << '\n';
    out << "strokes skipped: " << result.skipped.size() << '\n';
    for (const auto& s : result.skipped) {
        out << "  stroke " << s.stroke_index << ": " << skip_reason_name(s.reason) << '\n';
    }
    return kOk;
}

FeatureMatrix load_features(const std::string& path) {
    return parse_file(path, [](const std::string& s) { return read_feature_csv(s); });
}

int cmd_correlate(const RunConfig& cfg, std::ostream& out) {
    const auto m = load_features(cfg.get("input"));
    if (m.size() < 2) throw InputError(cfg.get("input") + ": correlation needs at least two rows");
    const auto corr = pearson_correlation_matrix(m.rows);
    write_output(cfg.get("out"), write_correlation_csv(corr, m.schema, cfg.comment_block()));
    out << "wrote " << m.dims() << "x" << m.dims() << " correlation matrix to " << cfg.get("out") << '\n';
    return kOk;
}

int cmd_select(const RunConfig& cfg, std::ostream& out) {
    const auto m = load_features(cfg.get("input"));
    GaConfig ga;
    ga.population_size = cfg.get_size("population");
    ga.generations = cfg.get_size("generations");
    ga.tournament_size = cfg.get_size("tournament");
    ga.crossover_rate = cfg.get_double("crossover_rate");
    if (cfg.get("mutation_rate") != "auto") ga.mutation_rate = cfg.get_double("mutation_rate");
    ga.elitism_count = cfg.get_size("elitism");
    const auto wrapper = kind_from_short_name(cfg.get("wrapper"));
    if (!wrapper) throw UsageError("unknown wrapper classifier '" + cfg.get("wrapper") + "'");
    ga.wrapper = spec_for(*wrapper, cfg);
    ga.folds = cfg.get_size("folds");
    ga.seed = cfg.get_u64("seed");
    ga.parsimony_penalty = cfg.get_double("parsimony");
    ga.threads = cfg.get_size("threads");
    try {
        ga.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    const auto result = run_ga(m, ga);
    const auto block = cfg.comment_block();
    write_output(cfg.get("out"), write_mask_file(result.best, m.schema, block));
    write_output(cfg.get("trace"), write_trace_csv(result.trace, block));
    out << "best fitness " << text::format_double(result.best.fitness.value_or(0.0)) << " with "
        << result.best.count() << " of " << m.dims() << " features (mask " << result.best.to_hex() << ")\n";
    out << "fitness trainings: " << result.trainings << '\n';
    return kOk;
}

int cmd_benchmark(const RunConfig& cfg, std::ostream& out) {
    const auto m = load_features(cfg.get("input"));
    std::optional<std::vector<std::string>> mask;
    if (!cfg.get("mask").empty()) {
        mask = parse_file(cfg.get("mask"), [](const std::string& s) { return read_mask_file(s); });
    }

    std::vector<ClassifierSpec> specs;
    if (cfg.get("classifiers") == "all") {
        for (auto kind : kAllClassifierKinds) specs.push_back(spec_for(kind, cfg));
    } else {
        for (auto field : text::split_fields(cfg.get("classifiers"))) {
            specs.push_back(spec_for(*kind_from_short_name(field), cfg));
        }
    }

    Protocol protocol;
    protocol.seed = cfg.get_u64("seed");
    protocol.standardize = cfg.get_bool("standardize");
    protocol.test_fraction = cfg.get_double("test_fraction");
    const auto folds = cfg.get_size("folds");
    if (folds == 1) throw UsageError("folds must be 0 (holdout) or at least 2");
    if (folds >= 2) {
        protocol.kind = Protocol::Kind::KFold;
        protocol.folds = folds;
    } else if (!(protocol.test_fraction > 0.0 && protocol.test_fraction < 1.0)) {
        throw UsageError("test_fraction must lie strictly between 0 and 1");
    }

    BenchmarkReport report;
    try {
        report = run_benchmark(m, specs, protocol, mask);
    } catch (const Error& e) {
        throw InputError(cfg.get("input") + ": " + e.what());
    }

    nlohmann::ordered_json json;
    nlohmann::ordered_json config;
    config["command"] = cfg.command();
    for (const auto& [k, v] : cfg.values()) config[k] = v;
    json["config"] = config;
    const auto body = to_json(report, cfg.get_bool("timings"));
    for (const auto& [k, v] : body.items()) json[k] = v;

    const std::string label = (mask ? "GA-" : "") + cfg.get("dataset_label");
    const std::pair<std::string, const BenchmarkReport*> column{label, &report};
    const auto table = format_accuracy_table({&column, 1});
    const auto block = cfg.comment_block();
    write_output(cfg.get("out"), json.dump(2) + "\n");
    write_output(cfg.get("table"), block + table);
    write_output(cfg.get("series"), write_series_csv({&column, 1}, block));
    write_output(cfg.get("loss_trace"), write_loss_trace_csv(report, block));

    out << table;
    for (const auto& r : report.results) {
        if (!r.ok) out << short_name(r.spec.kind()) << " failed: " << r.error << '\n';
    }
    return kOk;
}

using Handler = std::function<int(const RunConfig&, std::ostream&)>;

const std::map<std::string, std::pair<std::string, Handler>>& commands() {
    static const std::map<std::string, std::pair<std::string, Handler>> table = {
        {"synth", {"Generate synthetic raw touch events", cmd_synth}},
        {"extract", {"Segment raw events into strokes and extract features", cmd_extract}},
        {"correlate", {"Pearson correlation matrix of a feature CSV", cmd_correlate}},
        {"select", {"Genetic-algorithm wrapper feature selection", cmd_select}},
        {"benchmark", {"Train and score classifiers on a shared split", cmd_benchmark}},
    };
    return table;
}

RunConfig resolve(const std::string& command, const std::vector<KeySpec>& keys, const std::string& config_path,
                  const std::map<std::string, std::string>& flags) {
    std::map<std::string, std::string> values;
    for (const auto& key : keys) values[key.name] = canonical(key, key.default_value);

    auto lookup = [&](const std::string& name) -> const KeySpec& {
        for (const auto& key : keys) {
            if (key.name == name) return key;
        }
        throw UsageError("unknown config key '" + name + "' for " + command);
    };

    if (!config_path.empty()) {
        std::string source;
        try {
            source = text::read_file(config_path);
        } catch (const std::exception&) {
            throw InputError(config_path + ": cannot read config file");
        }
        std::vector<std::pair<std::string, std::string>> entries;
        try {
            entries = parse_config_text(source);
        } catch (const UsageError& e) {
            throw UsageError(config_path + ": " + e.what());
        }
        for (const auto& [k, v] : entries) {
            if (k == "command") {
                if (v != command) throw UsageError(config_path + ": config was written by '" + v + "'");
                continue;
            }
            values[k] = canonical(lookup(k), v);
        }
    }
    for (const auto& [k, v] : flags) values[k] = canonical(lookup(k), v);

    if (values.contains("input") && values["input"].empty()) throw UsageError(command + ": an input path is required");
    if (values["out"].empty()) throw UsageError(command + ": --out is required");
    if (values.contains("trace") && values["trace"].empty()) values["trace"] = derived_path(values["out"], ".trace.csv");
    if (values.contains("table") && values["table"].empty()) values["table"] = derived_path(values["out"], ".table.txt");
    if (values.contains("series") && values["series"].empty()) {
        values["series"] = derived_path(values["out"], ".series.csv");
    }
    if (values.contains("loss_trace") && values["loss_trace"].empty()) {
        values["loss_trace"] = derived_path(values["out"], ".loss.csv");
    }

    std::vector<std::pair<std::string, std::string>> ordered;
    for (const auto& key : keys) ordered.emplace_back(key.name, values[key.name]);
    return RunConfig(command, std::move(ordered));
}

int classify(const Error& e) {
    switch (e.code()) {
        case ErrorCode::MissingColumn:
        case ErrorCode::BadValue:
        case ErrorCode::EmptyInput:
        case ErrorCode::LengthMismatch:
        case ErrorCode::UnknownLabel:
        case ErrorCode::Io:
            return kInput;
        case ErrorCode::InvalidArgument:
            return kUsage;
        default:
            return kRuntime;
    }
}

}  // namespace

const std::string& RunConfig::get(std::string_view key) const {
    for (const auto& [k, v] : values_) {
        if (k == key) return v;
    }
    throw std::out_of_range("config key '" + std::string(key) + "' not resolved");
}

std::size_t RunConfig::get_size(std::string_view key) const {
    return static_cast<std::size_t>(get_u64(key));
}

std::uint64_t RunConfig::get_u64(std::string_view key) const {
    const auto v = text::parse_int(get(key));
    if (!v || *v < 0) throw UsageError("invalid value for " + std::string(key));
    return static_cast<std::uint64_t>(*v);
}

double RunConfig::get_double(std::string_view key) const {
    const auto v = text::parse_double(get(key));
    if (!v) throw UsageError("invalid value for " + std::string(key));
    return *v;
}

bool RunConfig::get_bool(std::string_view key) const { return get(key) == "true"; }

std::string RunConfig::comment_block() const {
    std::string block = "#@ command=" + command_ + "\n";
    for (const auto& [k, v] : values_) block += "#@ " + k + "=" + v + "\n";
    return block;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view source) {
    std::vector<std::pair<std::string, std::string>> entries;
    const auto trimmed = text::trim(source);
    if (!trimmed.empty() && trimmed.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(trimmed);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("malformed JSON: ") + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object()) throw UsageError("JSON has no config object");
        for (const auto& [k, v] : j["config"].items()) {
            entries.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
        }
        return entries;
    }

    std::vector<std::string_view> lines;
    bool embedded = false;
    std::size_t start = 0;
    while (start <= source.size()) {
        auto end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        auto line = text::trim(source.substr(start, end - start));
        if (line.starts_with("#@")) embedded = true;
        lines.push_back(line);
        start = end + 1;
    }
    for (auto line : lines) {
        if (embedded) {
            if (!line.starts_with("#@")) continue;
            line = text::trim(line.substr(2));
        } else if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw UsageError("expected key=value, found '" + std::string(line) + "'");
        entries.emplace_back(std::string(text::trim(line.substr(0, eq))), std::string(text::trim(line.substr(eq + 1))));
    }
    return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Touch-stroke biometric authentication pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::map<std::string, std::vector<KeySpec>> key_table;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands()) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "key=value file or an earlier artifact");
        key_table[name] = command_keys(name);
        auto& store = flag_values[name];
        for (const auto& key : key_table[name]) {
            std::string names = flag_name(key.name);
            if (key.name == "input") names = "input," + names;
            std::string help = key.help;
            if (!key.default_value.empty()) help += " [" + key.default_value + "]";
            sub->add_option(names, store[key.name], help);
        }
        subs[name] = sub;
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    std::string command;
    for (const auto& [name, sub] : subs) {
        if (sub->parsed()) command = name;
    }
    std::map<std::string, std::string> flags;
    for (const auto& key : key_table[command]) {
        if (subs[command]->count(flag_name(key.name)) > 0) flags[key.name] = flag_values[command][key.name];
    }

    try {
        const auto cfg = resolve(command, key_table[command], config_path, flags);
        return commands().at(command).second(cfg, out);
    } catch (const UsageError& e) {
        err << "touchauth " << command << ": " << e.what() << '\n';
        return kUsage;
    } catch (const InputError& e) {
        err << "touchauth " << command << ": " << e.what() << '\n';
        return kInput;
    } catch (const Error& e) {
        err << "touchauth " << command << ": " << e.what() << '\n';
        return classify(e);
    } catch (const std::exception& e) {
        err << "touchauth " << command << ": " << e.what() << '\n';
        return kRuntime;
    }
}

}  // namespace touchauth::cli
