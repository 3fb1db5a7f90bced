#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mcrank/corpus.hpp"
#include "mcrank/estimator.hpp"
#include "mcrank/metrics.hpp"
#include "mcrank/model.hpp"
#include "mcrank/oracle.hpp"

namespace mcrank {

struct ModelSpec {
    ModelKind kind = ModelKind::pcfg;
    int order = 4;                     // n-gram only
    std::uint64_t threshold = 10;      // backoff only
    std::size_t max_context = 0;       // backoff only, 0 = unbounded
    bool weighted = true;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Accepts "4-gram", "ngram:4", "backoff", "backoff:10", "pcfg".
ModelSpec parse_model_spec(std::string_view text);
std::string to_string(const ModelSpec& spec);

std::unique_ptr<PasswordModel> train_model(const PasswordCorpus& corpus, const ModelSpec& spec);

// Splittable seed derivation: independent, reproducible streams per
// (purpose, index) pair.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

enum class Variant { original, interpolation, sampling, all };
inline constexpr Variant kAllVariants[] = {Variant::original, Variant::interpolation, Variant::sampling, Variant::all};
std::string_view to_string(Variant v) noexcept;

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::string corpus_path;
    CorpusFormat corpus_format = CorpusFormat::plain;
    std::size_t top_n = 0;  // 0 keeps the whole corpus

    // Overlap, unique-draw and model-size reproductions.
    std::vector<ModelSpec> models;
    std::vector<std::size_t> sample_sizes{10'000, 30'000, 50'000};
    std::size_t overlap_trials = 3;
    std::vector<std::size_t> size_sweep;  // training sizes; empty derives top_n/10, top_n/2, top_n

    // Precision reproduction against the oracle.
    ModelSpec precision_model{};
    std::size_t precision_sample_size = 10'000;
    std::size_t trials = 100;
    double oracle_threshold = 20.0;
    std::size_t oracle_budget = kDefaultEntryBudget;
    RankMode rank_mode = RankMode::group;
    std::size_t fig3_limit = 50'000;
    std::size_t fig4_limit = 1'000;

    std::string output_dir = ".";
};

// Default model list: 4-gram, 5-gram, backoff, pcfg.
std::vector<ModelSpec> default_model_specs(bool weighted = true);

struct VariantSummary {
    Variant variant;
    double mean_weighted_error = 0.0;
    double mean_simple_error = 0.0;
};

struct ExperimentSummary {
    std::vector<std::string> files;
    std::size_t oracle_entries = 0;
    std::size_t top_k = 0;
    std::vector<VariantSummary> variants;
};

// Trains, samples, enumerates and writes the CSV bundle into
// config.output_dir. Output bytes depend only on the config. Progress lines
// go to log when given.
ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

// Precision part only, against an already trained model: per-trial error
// reports of the four estimator variants over the oracle list.
struct PrecisionResult {
    RankedList list;
    std::vector<std::vector<ErrorReport>> reports;  // [variant][trial]
    std::vector<VariantSummary> summary;
};
PrecisionResult run_precision(const PasswordModel& model, std::size_t sample_size, std::size_t trials,
                              double oracle_threshold, std::uint64_t seed,
                              std::size_t oracle_budget = kDefaultEntryBudget, RankMode mode = RankMode::group);

struct SpeedConfig {
    std::uint64_t seed = 1;
    std::vector<std::size_t> sample_sizes{10'000, 30'000, 50'000, 100'000};
    std::vector<std::size_t> bin_counts{100, 1000};  // uniform bins over neglog [0, 100)
    double bin_range = 100.0;
    std::size_t queries = 1'000'000;
    int repetitions = 10;
};

// Times plain and binned search; the baseline is plain search on the first
// sample size. Writes "sample_size,variant,bins,median_ns,relative,rep_ns..."
// style rows via write_speed_csv.
std::vector<BenchRow> run_speed_benchmark(const PasswordModel& model, const SpeedConfig& config);
void write_speed_csv(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace mcrank
