#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "touchauth/classifiers.hpp"
#include "touchauth/dataset.hpp"
#include "touchauth/random.hpp"

namespace touchauth {

/// Feature-inclusion mask evolved by the GA.
struct Chromosome {
    std::vector<std::uint8_t> genes;  // 1 = feature included
    std::optional<double> fitness;

    std::size_t size() const noexcept { return genes.size(); }
    std::size_t count() const noexcept;
    std::vector<std::size_t> selected() const;

    /// Genes in groups of four from feature 0; the first gene of a group is
    /// the high bit of its hex digit. "1100" -> "c", "10101" -> "a8".
    std::string to_hex() const;
    static Chromosome from_hex(std::string_view hex, std::size_t d);

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct GaConfig {
    std::size_t population_size = 30;
    std::size_t generations = 10;
    std::size_t tournament_size = 2;
    double crossover_rate = 0.9;
    std::optional<double> mutation_rate;  // unset = 1 / d
    std::size_t elitism_count = 2;
    ClassifierSpec wrapper = ClassifierSpec::defaults(ClassifierKind::CART);
    std::size_t folds = 3;
    std::uint64_t seed = 42;
    double parsimony_penalty = 0.0;  // subtracted per selected fraction of features
    std::size_t threads = 1;

    double effective_mutation_rate(std::size_t d) const {
        return mutation_rate ? *mutation_rate : 1.0 / static_cast<double>(d);
    }

    /// Throws InvalidArgument on out-of-range settings.
    void validate() const;
};

/// population_size masks with genes set independently with probability 0.5;
/// all-zero masks are redrawn.
std::vector<Chromosome> init_population(std::size_t d, const GaConfig& config, Rng& rng);
std::vector<Chromosome> init_population(std::size_t d, const GaConfig& config);

/// Wrapper fitness: mean k-fold accuracy of config.wrapper on the masked
/// columns (standardised on each training fold), minus the optional
/// parsimony penalty. Folds are drawn once from the full matrix so every
/// mask is scored on the same partition. Results are cached by mask.
class FitnessEvaluator {
public:
    FitnessEvaluator(const FeatureMatrix& m, const GaConfig& config);

    double evaluate(const Chromosome& c);

    /// Fills fitness for every chromosome lacking one. Uncached masks are
    /// trained on up to config.threads workers; results do not depend on
    /// the thread count.
    void evaluate_all(std::vector<Chromosome>& population);

    std::size_t trainings() const noexcept { return trainings_; }

private:
    double compute(const std::vector<std::uint8_t>& genes) const;

    const FeatureMatrix& m_;
    GaConfig config_;
    std::vector<Split> folds_;
    std::map<std::vector<std::uint8_t>, double> cache_;
    std::mutex mutex_;
    std::size_t trainings_ = 0;
};

/// Convenience single evaluation; stores the result on `c`.
double fitness(Chromosome& c, const FeatureMatrix& m, const GaConfig& config);

/// Best of k uniform draws with replacement; ties keep the earliest draw.
const Chromosome& tournament_select(std::span<const Chromosome> population, std::size_t k, Rng& rng);

/// With probability `rate`, single-point crossover at a uniform cut in
/// [1, d-1]; otherwise copies. Offspring carry no fitness.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng, double rate);
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t cut);

/// Flips each gene with probability `rate`; an all-zero result gets one
/// uniformly chosen gene set.
Chromosome mutate(const Chromosome& c, Rng& rng, double rate);

struct GaTraceRow {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::string best_mask_hex;

    friend bool operator==(const GaTraceRow&, const GaTraceRow&) = default;
};

struct GaResult {
    Chromosome best;  // highest fitness ever evaluated, earliest on ties
    std::vector<GaTraceRow> trace;
    std::size_t trainings = 0;
};

GaResult run_ga(const FeatureMatrix& m, const GaConfig& config);

/// `generation,best_fitness,mean_fitness,best_mask_hex`
std::string write_trace_csv(std::span<const GaTraceRow> trace, std::string_view comment_block = {});

/// Mask file: `mask_hex,..`, `mask_bits,<width>`, `fitness,..` then one
/// `feature,<name>` line per selected feature.
std::string write_mask_file(const Chromosome& best, std::span<const std::string> schema,
                            std::string_view comment_block = {});

/// Selected feature names from a mask file.
std::vector<std::string> read_mask_file(std::string_view source);

}  // namespace touchauth
