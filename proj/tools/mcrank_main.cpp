// mcrank: train password models, build Monte Carlo sample tables, estimate
// guess ranks and run the reproduction experiments.
//
// Exit codes: 0 success, 2 input/file/usage errors, 3 budget errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcrank/corpus.hpp"
#include "mcrank/csv.hpp"
#include "mcrank/error.hpp"
#include "mcrank/estimator.hpp"
#include "mcrank/experiment.hpp"
#include "mcrank/metrics.hpp"
#include "mcrank/model.hpp"
#include "mcrank/oracle.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

std::string default_output_dir() {
    const char* env = std::getenv("MCRANK_OUTPUT_DIR");
    return env && *env ? env : ".";
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw mcrank::InputError("cannot write '" + path + "'");
    return out;
}

struct TrainArgs {
    std::string corpus;
    std::string format = "plain";
    std::size_t top_n = 0;
    std::vector<std::string> models;
    bool unweighted = false;
    std::size_t max_context = 0;
    std::string out;
    std::vector<std::size_t> sweep;
    std::string csv;
};

int cmd_train(const TrainArgs& a) {
    auto corpus = mcrank::load_corpus_file(a.corpus, mcrank::parse_corpus_format(a.format));
    if (a.top_n) corpus = mcrank::top_n(corpus, a.top_n);
    std::vector<mcrank::ModelSpec> specs;
    for (const auto& m : a.models) {
        auto spec = mcrank::parse_model_spec(m);
        spec.weighted = !a.unweighted;
        spec.max_context = a.max_context;
        specs.push_back(spec);
    }

    if (!a.sweep.empty()) {
        if (a.csv.empty()) throw mcrank::InputError("--sweep needs --csv");
        auto out = open_or_throw(a.csv);
        out << "# fig1: serialized model size in bytes by number of training passwords\n"
            << "training_size,model,size_bytes\n";
        for (std::size_t n : a.sweep) {
            const auto part = mcrank::top_n(corpus, n);
            for (const auto& spec : specs) {
                out << part.size() << ',' << mcrank::to_string(spec) << ','
                    << mcrank::train_model(part, spec)->size_bytes() << '\n';
            }
        }
        return 0;
    }

    if (specs.size() != 1) throw mcrank::InputError("train needs exactly one --model unless --sweep is given");
    if (a.out.empty()) throw mcrank::InputError("train needs --out");
    const auto model = mcrank::train_model(corpus, specs.front());
    mcrank::save_model_file(*model, a.out);
    std::cout << model->describe() << " trained on " << corpus.size() << " passwords: " << model->size_bytes()
              << " bytes\n";
    return 0;
}

struct SampleArgs {
    std::string model;
    std::size_t n = 10'000;
    std::string mode = "plain";
    std::uint64_t seed = 1;
    std::uint64_t max_draws = 0;
    std::string out;
    std::string csv;
};

int cmd_sample(const SampleArgs& a) {
    const auto model = mcrank::load_model_file(a.model);
    mcrank::Rng rng(mcrank::derive_seed(a.seed, 0, 0));
    const auto table =
        mcrank::build_sample(*model, a.n, mcrank::parse_sample_mode(a.mode), rng, {a.max_draws});
    if (!a.out.empty()) mcrank::save_table_file(table, a.out);
    if (!a.csv.empty()) {
        auto out = open_or_throw(a.csv);
        mcrank::write_table_csv(table, out);
    }
    std::cout << "entries=" << table.size() << " n_effective=" << table.n_effective()
              << " sampled_count=" << table.sampled_count()
              << " overlap=" << mcrank::format_double(mcrank::overlap(table)) << '\n';
    return 0;
}

struct EstimateArgs {
    std::string model;
    std::string table;
    bool interpolate = false;
    std::size_t bins = 0;
    double bin_range = 100.0;
};

int cmd_estimate(const EstimateArgs& a) {
    const auto model = mcrank::load_model_file(a.model);
    const auto table = mcrank::load_table_file(a.table);
    std::optional<mcrank::BinIndex> bins;
    if (a.bins > 0) bins = mcrank::build_bins(table, mcrank::uniform_taus(a.bin_range / static_cast<double>(a.bins), a.bins));
    const mcrank::EstimateOptions opts{a.interpolate, bins ? &*bins : nullptr};

    std::string line;
    while (std::getline(std::cin, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const double neglog = model->neg_log2_prob(line);
        const auto est = mcrank::estimate_rank(table, neglog, opts);
        std::cout << line << '\t' << mcrank::format_double(neglog) << '\t' << mcrank::format_double(est.rank)
                  << '\n';
    }
    return 0;
}

struct OracleArgs {
    std::string model;
    double threshold = 20.0;
    std::size_t budget = mcrank::kDefaultEntryBudget;
    bool positional = false;
    std::string out;
};

int cmd_oracle(const OracleArgs& a) {
    const auto model = mcrank::load_model_file(a.model);
    const auto list = mcrank::build_ranked_list(*model, a.threshold, a.budget,
                                                a.positional ? mcrank::RankMode::positional : mcrank::RankMode::group);
    if (a.out.empty() || a.out == "-") {
        mcrank::write_ranked_csv(list, std::cout);
    } else {
        auto out = open_or_throw(a.out);
        mcrank::write_ranked_csv(list, out);
    }
    std::cerr << list.size() << " passwords with neglog <= " << mcrank::format_double(a.threshold) << '\n';
    return 0;
}

struct ExperimentArgs {
    mcrank::ExperimentConfig config;
    std::string format = "plain";
    std::vector<std::string> models;
    std::string precision_model = "pcfg";
    bool unweighted = false;
    bool positional = false;
};

int cmd_experiment(ExperimentArgs a) {
    a.config.corpus_format = mcrank::parse_corpus_format(a.format);
    for (const auto& m : a.models) a.config.models.push_back(mcrank::parse_model_spec(m));
    if (a.config.models.empty()) a.config.models = mcrank::default_model_specs();
    for (auto& m : a.config.models) m.weighted = !a.unweighted;
    a.config.precision_model = mcrank::parse_model_spec(a.precision_model);
    a.config.precision_model.weighted = !a.unweighted;
    a.config.rank_mode = a.positional ? mcrank::RankMode::positional : mcrank::RankMode::group;

    const auto summary = mcrank::run_experiment(a.config, &std::cerr);
    for (const auto& f : summary.files) std::cout << f << '\n';
    return 0;
}

struct BenchArgs {
    std::string model;
    mcrank::SpeedConfig config;
    std::string out;
};

int cmd_bench(const BenchArgs& a) {
    const auto model = mcrank::load_model_file(a.model);
    const auto rows = mcrank::run_speed_benchmark(*model, a.config);
    if (a.out.empty() || a.out == "-") {
        mcrank::write_speed_csv(rows, std::cout);
    } else {
        auto out = open_or_throw(a.out);
        mcrank::write_speed_csv(rows, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo password rank estimation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file");

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train a model (or sweep model sizes over training-set sizes)");
    train_cmd->add_option("--corpus", train.corpus, "Corpus file")->required();
    train_cmd->add_option("--format", train.format, "plain, counted or ranked")->capture_default_str();
    train_cmd->add_option("--top-n", train.top_n, "Keep only the N most frequent passwords (0 = all)");
    train_cmd->add_option("--model", train.models, "N-gram, backoff[:T] or pcfg (repeatable with --sweep)")->required();
    train_cmd->add_flag("--unweighted", train.unweighted, "Count every unique password once");
    train_cmd->add_option("--max-context", train.max_context, "Backoff context length cap (0 = unbounded)");
    train_cmd->add_option("--out", train.out, "Model file to write");
    train_cmd->add_option("--sweep", train.sweep, "Training sizes for a size sweep")->delimiter(',');
    train_cmd->add_option("--csv", train.csv, "CSV output for --sweep");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "Build a sample table from a model");
    sample_cmd->add_option("--model", sample.model, "Model file")->required();
    sample_cmd->add_option("-n,--size", sample.n, "Sample size")->capture_default_str();
    sample_cmd->add_option("--mode", sample.mode, "plain or unique")->capture_default_str();
    sample_cmd->add_option("--seed", sample.seed, "Random seed")->capture_default_str();
    sample_cmd->add_option("--max-draws", sample.max_draws, "Draw budget (0 = automatic)");
    sample_cmd->add_option("--out", sample.out, "Table file to write");
    sample_cmd->add_option("--csv", sample.csv, "Also export index,neglog,cumrank CSV");

    EstimateArgs estimate;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate ranks of passwords read from stdin");
    estimate_cmd->add_option("--model", estimate.model, "Model file")->required();
    estimate_cmd->add_option("--table", estimate.table, "Table file")->required();
    estimate_cmd->add_flag("--interpolate", estimate.interpolate, "Log-space interpolation between sample entries");
    estimate_cmd->add_option("--bins", estimate.bins, "Uniform bin count over neglog [0, 100) (0 = off)");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate exact ranks down to a neglog threshold");
    oracle_cmd->add_option("--model", oracle.model, "Model file")->required();
    oracle_cmd->add_option("--threshold", oracle.threshold, "Maximum neglog")->capture_default_str();
    oracle_cmd->add_option("--budget", oracle.budget, "Maximum number of entries")->capture_default_str();
    oracle_cmd->add_flag("--positional", oracle.positional, "Positional instead of tie-group ranks");
    oracle_cmd->add_option("--out", oracle.out, "CSV output (default stdout)");

    ExperimentArgs exp;
    exp.config.output_dir = default_output_dir();
    auto* exp_cmd = app.add_subcommand("experiment", "Run the overlap/draw/precision reproductions");
    exp_cmd->add_option("--corpus", exp.config.corpus_path, "Corpus file")->required();
    exp_cmd->add_option("--format", exp.format, "plain, counted or ranked")->capture_default_str();
    exp_cmd->add_option("--top-n", exp.config.top_n, "Training passwords (0 = all)");
    exp_cmd->add_option("--models", exp.models, "Models for overlap/draw/size tables")->delimiter(',');
    exp_cmd->add_flag("--unweighted", exp.unweighted, "Count every unique password once");
    exp_cmd->add_option("--sample-sizes", exp.config.sample_sizes, "Sample sizes")->delimiter(',');
    exp_cmd->add_option("--overlap-trials", exp.config.overlap_trials, "Trials per overlap cell")->capture_default_str();
    exp_cmd->add_option("--size-sweep", exp.config.size_sweep, "Training sizes for the size table")->delimiter(',');
    exp_cmd->add_option("--precision-model", exp.precision_model, "Model for the precision runs")->capture_default_str();
    exp_cmd->add_option("--precision-sample-size", exp.config.precision_sample_size, "Sample size")->capture_default_str();
    exp_cmd->add_option("--trials", exp.config.trials, "Precision trials")->capture_default_str();
    exp_cmd->add_option("--oracle-threshold", exp.config.oracle_threshold, "Oracle neglog threshold")->capture_default_str();
    exp_cmd->add_option("--oracle-budget", exp.config.oracle_budget, "Oracle entry budget")->capture_default_str();
    exp_cmd->add_flag("--positional", exp.positional, "Positional instead of tie-group ranks");
    exp_cmd->add_option("--seed", exp.config.seed, "Master seed")->capture_default_str();
    exp_cmd->add_option("--out-dir", exp.config.output_dir, "Output directory (default $MCRANK_OUTPUT_DIR or .)");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time plain vs binned rank lookup");
    bench_cmd->add_option("--model", bench.model, "Model file")->required();
    bench_cmd->add_option("--sample-sizes", bench.config.sample_sizes, "Sample sizes")->delimiter(',');
    bench_cmd->add_option("--bins", bench.config.bin_counts, "Uniform bin counts")->delimiter(',');
    bench_cmd->add_option("--queries", bench.config.queries, "Number of sampled queries")->capture_default_str();
    bench_cmd->add_option("--repetitions", bench.config.repetitions, "Timing repetitions")->capture_default_str();
    bench_cmd->add_option("--seed", bench.config.seed, "Master seed")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*train_cmd) return cmd_train(train);
        if (*sample_cmd) return cmd_sample(sample);
        if (*estimate_cmd) return cmd_estimate(estimate);
        if (*oracle_cmd) return cmd_oracle(oracle);
        if (*exp_cmd) return cmd_experiment(exp);
        if (*bench_cmd) return cmd_bench(bench);
    } catch (const mcrank::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\nhint: lower the oracle threshold or raise the budget\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
