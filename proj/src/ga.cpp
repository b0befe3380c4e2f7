#include "touchauth/ga.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "touchauth/error.hpp"
#include "touchauth/text_io.hpp"

namespace touchauth {

std::size_t Chromosome::count() const noexcept {
    return static_cast<std::size_t>(std::count(genes.begin(), genes.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Chromosome::selected() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < genes.size(); ++i) {
        if (genes[i]) idx.push_back(i);
    }
    return idx;
}

std::string Chromosome::to_hex() const {
    constexpr char digits[] = "0123456789abcdef";
    std::string hex;
    for (std::size_t i = 0; i < genes.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            nibble <<= 1;
            if (i + b < genes.size() && genes[i + b]) nibble |= 1u;
        }
        hex += digits[nibble];
    }
    return hex;
}

Chromosome Chromosome::from_hex(std::string_view hex, std::size_t d) {
    if (hex.size() != (d + 3) / 4) throw Error(ErrorCode::LengthMismatch, "hex mask length does not match width");
    Chromosome c;
    c.genes.assign(d, 0);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char ch = hex[i];
        unsigned nibble;
        if (ch >= '0' && ch <= '9') nibble = static_cast<unsigned>(ch - '0');
        else if (ch >= 'a' && ch <= 'f') nibble = static_cast<unsigned>(ch - 'a' + 10);
        else if (ch >= 'A' && ch <= 'F') nibble = static_cast<unsigned>(ch - 'A' + 10);
        else throw Error(ErrorCode::BadValue, "invalid hex digit in mask");
        for (std::size_t b = 0; b < 4; ++b) {
            const bool bit = (nibble >> (3 - b)) & 1u;
            if (i * 4 + b < d) c.genes[i * 4 + b] = bit ? 1 : 0;
            else if (bit) throw Error(ErrorCode::BadValue, "hex mask sets padding bits");
        }
    }
    return c;
}

void GaConfig::validate() const {
    if (population_size < 2) throw Error(ErrorCode::InvalidArgument, "population_size must be >= 2");
    if (generations < 1) throw Error(ErrorCode::InvalidArgument, "generations must be >= 1");
    if (elitism_count >= population_size) {
        throw Error(ErrorCode::InvalidArgument, "elitism_count must be below population_size");
    }
    if (tournament_size < 1) throw Error(ErrorCode::InvalidArgument, "tournament_size must be >= 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "crossover_rate must lie in [0, 1]");
    }
    if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "mutation_rate must lie in [0, 1]");
    }
    if (folds < 2) throw Error(ErrorCode::InvalidArgument, "folds must be >= 2");
    if (parsimony_penalty < 0.0) throw Error(ErrorCode::InvalidArgument, "parsimony_penalty must be >= 0");
}

std::vector<Chromosome> init_population(std::size_t d, const GaConfig& config, Rng& rng) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "need at least one feature");
    std::vector<Chromosome> population(config.population_size);
    for (auto& c : population) {
        c.genes.resize(d);
        do {
            for (auto& g : c.genes) g = static_cast<std::uint8_t>(rng() >> 63);
        } while (c.count() == 0);
    }
    return population;
}

std::vector<Chromosome> init_population(std::size_t d, const GaConfig& config) {
    Rng rng(derive_seed(config.seed, 0x6a));
    return init_population(d, config, rng);
}

FitnessEvaluator::FitnessEvaluator(const FeatureMatrix& m, const GaConfig& config) : m_(m), config_(config) {
    config_.validate();
    m_.validate();
    if (m_.dims() == 0 || m_.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty feature matrix");
    if (m_.classes().size() < 2) throw Error(ErrorCode::DegenerateClass, "feature matrix has fewer than two classes");
    folds_ = k_fold(m_, config_.folds, derive_seed(config_.seed, 0xf01d));
}

double FitnessEvaluator::compute(const std::vector<std::uint8_t>& genes) const {
    std::vector<std::size_t> columns;
    for (std::size_t i = 0; i < genes.size(); ++i) {
        if (genes[i]) columns.push_back(i);
    }
    if (columns.empty()) throw Error(ErrorCode::InvalidArgument, "chromosome selects no features");
    const Matrix projected = m_.rows.select_cols(columns);
    double total = 0.0;
    for (std::size_t f = 0; f < folds_.size(); ++f) {
        const auto& split = folds_[f];
        const auto scaled = standardize(projected.select_rows(split.train));
        std::vector<std::int64_t> y_train, y_test;
        for (auto i : split.train) y_train.push_back(m_.labels[i]);
        for (auto i : split.test) y_test.push_back(m_.labels[i]);
        const auto model = train(config_.wrapper, scaled.rows, y_train, derive_seed(config_.seed, 0x100 + f));
        const auto predicted = model->predict(scaled.transform.transform(projected.select_rows(split.test)));
        std::size_t hits = 0;
        for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == y_test[i] ? 1 : 0;
        total += static_cast<double>(hits) / static_cast<double>(predicted.size());
    }
    const double accuracy = total / static_cast<double>(folds_.size());
    return accuracy - config_.parsimony_penalty * static_cast<double>(columns.size()) /
                          static_cast<double>(genes.size());
}

double FitnessEvaluator::evaluate(const Chromosome& c) {
    if (c.size() != m_.dims()) throw Error(ErrorCode::LengthMismatch, "chromosome width differs from feature count");
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(c.genes); it != cache_.end()) return it->second;
    }
    const double value = compute(c.genes);
    std::lock_guard lock(mutex_);
    ++trainings_;
    cache_.emplace(c.genes, value);
    return value;
}

void FitnessEvaluator::evaluate_all(std::vector<Chromosome>& population) {
    std::vector<std::vector<std::uint8_t>> pending;
    for (const auto& c : population) {
        if (c.size() != m_.dims()) throw Error(ErrorCode::LengthMismatch, "chromosome width differs from feature count");
        if (!c.fitness && !cache_.contains(c.genes) &&
            std::find(pending.begin(), pending.end(), c.genes) == pending.end()) {
            pending.push_back(c.genes);
        }
    }
    std::vector<double> results(pending.size());
    const std::size_t workers = std::clamp<std::size_t>(config_.threads, 1, std::max<std::size_t>(1, pending.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < pending.size(); ++i) results[i] = compute(pending[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < pending.size(); i = next++) {
                    try {
                        results[i] = compute(pending[i]);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        pool.clear();
        if (failure) std::rethrow_exception(failure);
    }
    for (std::size_t i = 0; i < pending.size(); ++i) cache_.emplace(pending[i], results[i]);
    trainings_ += pending.size();
    for (auto& c : population) {
        if (!c.fitness) c.fitness = cache_.at(c.genes);
    }
}

double fitness(Chromosome& c, const FeatureMatrix& m, const GaConfig& config) {
    FitnessEvaluator evaluator(m, config);
    c.fitness = evaluator.evaluate(c);
    return *c.fitness;
}

const Chromosome& tournament_select(std::span<const Chromosome> population, std::size_t k, Rng& rng) {
    if (population.empty()) throw Error(ErrorCode::InvalidArgument, "tournament over an empty population");
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "tournament size must be >= 1");
    const Chromosome* best = nullptr;
    for (std::size_t draw = 0; draw < k; ++draw) {
        const auto& candidate = population[uniform_index(rng, population.size())];
        if (!candidate.fitness) throw Error(ErrorCode::InvalidArgument, "tournament over unevaluated chromosomes");
        if (!best || *candidate.fitness > *best->fitness) best = &candidate;
    }
    return *best;
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t cut) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "parents differ in length");
    if (cut > a.size()) throw Error(ErrorCode::InvalidArgument, "cut beyond chromosome length");
    Chromosome x, y;
    x.genes.reserve(a.size());
    y.genes.reserve(a.size());
    x.genes.insert(x.genes.end(), a.genes.begin(), a.genes.begin() + static_cast<std::ptrdiff_t>(cut));
    x.genes.insert(x.genes.end(), b.genes.begin() + static_cast<std::ptrdiff_t>(cut), b.genes.end());
    y.genes.insert(y.genes.end(), b.genes.begin(), b.genes.begin() + static_cast<std::ptrdiff_t>(cut));
    y.genes.insert(y.genes.end(), a.genes.begin() + static_cast<std::ptrdiff_t>(cut), a.genes.end());
    return {std::move(x), std::move(y)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng, double rate) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "parents differ in length");
    const double draw = uniform01(rng);
    if (a.size() >= 2 && draw < rate) {
        const std::size_t cut = 1 + static_cast<std::size_t>(uniform_index(rng, a.size() - 1));
        return crossover_at(a, b, cut);
    }
    return {Chromosome{a.genes, std::nullopt}, Chromosome{b.genes, std::nullopt}};
}

Chromosome mutate(const Chromosome& c, Rng& rng, double rate) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw Error(ErrorCode::InvalidArgument, "mutation rate must lie in [0, 1]");
    Chromosome out{c.genes, std::nullopt};
    for (auto& g : out.genes) {
        if (uniform01(rng) < rate) g ^= 1;
    }
    if (!out.genes.empty() && out.count() == 0) out.genes[uniform_index(rng, out.genes.size())] = 1;
    return out;
}

GaResult run_ga(const FeatureMatrix& m, const GaConfig& config) {
    config.validate();
    FitnessEvaluator evaluator(m, config);
    const std::size_t d = m.dims();
    const double mutation_rate = config.effective_mutation_rate(d);

    Rng rng(derive_seed(config.seed, 0x6a));
    auto population = init_population(d, config, rng);
    GaResult result;

    for (std::size_t generation = 0; generation < config.generations; ++generation) {
        evaluator.evaluate_all(population);

        std::vector<std::size_t> rank(population.size());
        for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
        std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
            return *population[a].fitness > *population[b].fitness;
        });
        const auto& leader = population[rank.front()];
        if (!result.best.fitness || *leader.fitness > *result.best.fitness) result.best = leader;

        double sum = 0.0;
        for (const auto& c : population) sum += *c.fitness;
        result.trace.push_back({generation, *leader.fitness, sum / static_cast<double>(population.size()),
                                leader.to_hex()});

        if (generation + 1 == config.generations) break;

        std::vector<Chromosome> next;
        next.reserve(population.size());
        for (std::size_t e = 0; e < config.elitism_count; ++e) next.push_back(population[rank[e]]);
        while (next.size() < population.size()) {
            const auto& a = tournament_select(population, config.tournament_size, rng);
            const auto& b = tournament_select(population, config.tournament_size, rng);
            auto [x, y] = crossover(a, b, rng, config.crossover_rate);
            next.push_back(mutate(x, rng, mutation_rate));
            if (next.size() < population.size()) next.push_back(mutate(y, rng, mutation_rate));
        }
        population = std::move(next);
    }
    result.trainings = evaluator.trainings();
    return result;
}

std::string write_trace_csv(std::span<const GaTraceRow> trace, std::string_view comment_block) {
    std::string out(comment_block);
    out += "generation,best_fitness,mean_fitness,best_mask_hex\n";
    for (const auto& row : trace) {
        out += std::to_string(row.generation) + ',' + text::format_double(row.best_fitness) + ',' +
               text::format_double(row.mean_fitness) + ',' + row.best_mask_hex + '\n';
    }
    return out;
}

std::string write_mask_file(const Chromosome& best, std::span<const std::string> schema,
                            std::string_view comment_block) {
    if (best.size() != schema.size()) throw Error(ErrorCode::LengthMismatch, "mask width differs from schema");
    std::string out(comment_block);
    out += "mask_hex," + best.to_hex() + '\n';
    out += "mask_bits," + std::to_string(best.size()) + '\n';
    out += "fitness," + (best.fitness ? text::format_double(*best.fitness) : std::string("nan")) + '\n';
    for (auto i : best.selected()) out += "feature," + schema[i] + '\n';
    return out;
}

std::vector<std::string> read_mask_file(std::string_view source) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= source.size()) {
        auto end = source.find('\n', start);
        if (end == std::string_view::npos) end = source.size();
        const auto line = text::trim(source.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = text::split_fields(line);
        if (fields.size() == 2 && fields[0] == "feature") names.emplace_back(fields[1]);
    }
    if (names.empty()) throw Error(ErrorCode::EmptyInput, "mask file lists no features");
    return names;
}

}  // namespace touchauth
