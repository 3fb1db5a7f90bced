#include "mcrank/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "mcrank/backoff.hpp"
#include "mcrank/csv.hpp"
#include "mcrank/error.hpp"
#include "mcrank/ngram.hpp"
#include "mcrank/pcfg.hpp"

namespace mcrank {

namespace {

enum Stream : std::uint64_t {
    kOverlapStream = 1,
    kUniqueStream = 2,
    kPrecisionPlainStream = 3,
    kPrecisionUniqueStream = 4,
    kBenchQueryStream = 5,
    kBenchTableStream = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ParseError("bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

std::ofstream open_output(const std::string& dir, const std::string& name, std::vector<std::string>& files) {
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path + "'");
    files.push_back(path);
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept {
    std::uint64_t x = splitmix64(master);
    x = splitmix64(x ^ (stream * 0xd1342543de82ef95ULL));
    return splitmix64(x ^ index);
}

ModelSpec parse_model_spec(std::string_view text) {
    ModelSpec spec;
    if (text == "pcfg") {
        spec.kind = ModelKind::pcfg;
        return spec;
    }
    if (text == "backoff" || text.starts_with("backoff:")) {
        spec.kind = ModelKind::backoff;
        if (text.size() >= 8) spec.threshold = parse_uint(text.substr(8), "backoff threshold");
        if (spec.threshold == 0) throw ParseError("backoff threshold must be positive");
        return spec;
    }
    std::string_view order;
    if (text.ends_with("-gram")) {
        order = text.substr(0, text.size() - 5);
    } else if (text.starts_with("ngram:")) {
        order = text.substr(6);
    } else {
        throw ParseError("unknown model '" + std::string(text) + "' (expected N-gram, backoff[:T] or pcfg)");
    }
    spec.kind = ModelKind::ngram;
    const auto n = parse_uint(order, "n-gram order");
    if (n < 2 || n > 255) throw ParseError("n-gram order must be in [2, 255]");
    spec.order = static_cast<int>(n);
    return spec;
}

std::string to_string(const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::ngram:
            return std::to_string(spec.order) + "-gram";
        case ModelKind::backoff:
            return spec.threshold == BackoffModel::kDefaultThreshold ? "backoff"
                                                                     : "backoff:" + std::to_string(spec.threshold);
        case ModelKind::pcfg:
            return "pcfg";
    }
    return "unknown";
}

std::vector<ModelSpec> default_model_specs(bool weighted) {
    std::vector<ModelSpec> specs = {parse_model_spec("4-gram"), parse_model_spec("5-gram"),
                                    parse_model_spec("backoff"), parse_model_spec("pcfg")};
    for (auto& s : specs) s.weighted = weighted;
    return specs;
}

std::unique_ptr<PasswordModel> train_model(const PasswordCorpus& corpus, const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::ngram:
            return std::make_unique<NGramModel>(train_ngram(corpus, spec.order, spec.weighted));
        case ModelKind::backoff:
            return std::make_unique<BackoffModel>(train_backoff(corpus, spec.threshold, spec.weighted, spec.max_context));
        case ModelKind::pcfg:
            return std::make_unique<PcfgModel>(train_pcfg(corpus, spec.weighted));
    }
    throw MisuseError("unknown model kind");
}

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::original:
            return "original";
        case Variant::interpolation:
            return "interpolation";
        case Variant::sampling:
            return "sampling";
        case Variant::all:
            return "all";
    }
    return "unknown";
}

PrecisionResult run_precision(const PasswordModel& model, std::size_t sample_size, std::size_t trials,
                              double oracle_threshold, std::uint64_t seed, std::size_t oracle_budget,
                              RankMode mode) {
    if (trials == 0) throw MisuseError("need at least one trial");
    PrecisionResult result{build_ranked_list(model, oracle_threshold, oracle_budget, mode), {}, {}};
    const auto& entries = result.list.entries();
    result.reports.assign(4, {});

    std::vector<double> estimates(entries.size());
    for (std::size_t t = 0; t < trials; ++t) {
        Rng plain_rng(derive_seed(seed, kPrecisionPlainStream, t));
        Rng unique_rng(derive_seed(seed, kPrecisionUniqueStream, t));
        const SampleTable plain = build_sample(model, sample_size, SampleMode::plain, plain_rng);
        const SampleTable unique = build_sample(model, sample_size, SampleMode::unique, unique_rng);

        for (std::size_t v = 0; v < 4; ++v) {
            const Variant variant = kAllVariants[v];
            const bool interpolate = variant == Variant::interpolation || variant == Variant::all;
            const SampleTable& table =
                (variant == Variant::original || variant == Variant::interpolation) ? plain : unique;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                estimates[i] = estimate_rank(table, entries[i].neglog, {interpolate, nullptr}).rank;
            }
            result.reports[v].push_back(error_report(result.list, estimates));
        }
    }
    for (std::size_t v = 0; v < 4; ++v) {
        const auto mean = average_reports(result.reports[v]);
        result.summary.push_back({kAllVariants[v], mean.weighted_error, mean.simple_error});
    }
    return result;
}

ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* log) {
    auto note = [log](const std::string& line) {
        if (log) *log << line << '\n' << std::flush;
    };
    if (config.corpus_path.empty()) throw InputError("no corpus path given");
    if (config.sample_sizes.empty()) throw MisuseError("need at least one sample size");
    std::filesystem::create_directories(config.output_dir);

    PasswordCorpus corpus = load_corpus_file(config.corpus_path, config.corpus_format);
    if (config.top_n != 0) corpus = top_n(corpus, config.top_n);
    note("corpus: " + std::to_string(corpus.size()) + " unique passwords, total count " +
         std::to_string(corpus.total_count()));

    const auto specs = config.models.empty() ? default_model_specs() : config.models;
    ExperimentSummary summary;

    {
        std::ofstream cfg = open_output(config.output_dir, "config.txt", summary.files);
        cfg << "seed=" << config.seed << "\ncorpus_size=" << corpus.size() << "\ntop_n=" << config.top_n
            << "\nsample_sizes=";
        for (std::size_t i = 0; i < config.sample_sizes.size(); ++i) cfg << (i ? "," : "") << config.sample_sizes[i];
        cfg << "\noverlap_trials=" << config.overlap_trials << "\nprecision_model=" << to_string(config.precision_model)
            << "\nprecision_sample_size=" << config.precision_sample_size << "\ntrials=" << config.trials
            << "\noracle_threshold=" << format_double(config.oracle_threshold)
            << "\nrank_mode=" << (config.rank_mode == RankMode::group ? "group" : "positional") << '\n';
    }

    // Model size against training-set size.
    {
        std::vector<std::size_t> sweep = config.size_sweep;
        if (sweep.empty()) sweep = {std::max<std::size_t>(1, corpus.size() / 10), std::max<std::size_t>(1, corpus.size() / 2), corpus.size()};
        std::ofstream out = open_output(config.output_dir, "fig1_model_size.csv", summary.files);
        out << "# fig1: serialized model size in bytes by number of training passwords\n";
        out << "training_size,model,size_bytes\n";
        for (std::size_t n : sweep) {
            const PasswordCorpus part = top_n(corpus, n);
            for (const auto& spec : specs) {
                const auto model = train_model(part, spec);
                out << part.size() << ',' << to_string(spec) << ',' << model->size_bytes() << '\n';
            }
        }
        note("model sizes written");
    }

    // Overlap, unique-probability draw counts and one sampled rank curve per model.
    std::map<std::string, std::unique_ptr<PasswordModel>> trained;
    {
        std::ofstream overlap_out = open_output(config.output_dir, "table1_overlap.csv", summary.files);
        std::ofstream unique_out = open_output(config.output_dir, "table2_unique_draws.csv", summary.files);
        std::ofstream ranks_out = open_output(config.output_dir, "fig2_ranks.csv", summary.files);
        overlap_out << "# table1: overlap 1 - |distinct probabilities| / n of plain samples\n"
                    << "model,sample_size,trial,overlap\n";
        unique_out << "# table2: draws needed to reach n distinct probabilities\n"
                   << "model,target_size,trial,sampled_count\n";
        ranks_out << "# fig2: cumulative rank by position in a plain sample (trial 0, first sample size)\n"
                  << "model,index,neglog,cumrank\n";

        for (std::size_t m = 0; m < specs.size(); ++m) {
            const auto& spec = specs[m];
            const std::string name = to_string(spec);
            auto model = train_model(corpus, spec);
            note("trained " + name + " (" + std::to_string(model->size_bytes()) + " bytes)");
            for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
                const std::size_t n = config.sample_sizes[s];
                std::vector<double> overlaps;
                std::vector<double> draws;
                for (std::size_t t = 0; t < config.overlap_trials; ++t) {
                    const std::uint64_t index = (m * 1'000 + s) * 1'000'000 + t;
                    Rng rng(derive_seed(config.seed, kOverlapStream, index));
                    const SampleTable plain = build_sample(*model, n, SampleMode::plain, rng);
                    overlaps.push_back(overlap(plain));
                    overlap_out << name << ',' << n << ',' << t << ',' << format_double(overlaps.back()) << '\n';
                    if (s == 0 && t == 0) {
                        const auto neglogs = plain.neglogs();
                        const auto cum = plain.cumranks();
                        for (std::size_t i = 0; i < neglogs.size(); ++i) {
                            ranks_out << name << ',' << i + 1 << ',' << format_double(neglogs[i]) << ','
                                      << format_double(cum[i]) << '\n';
                        }
                    }
                    Rng urng(derive_seed(config.seed, kUniqueStream, index));
                    const SampleTable unique = build_sample(*model, n, SampleMode::unique, urng);
                    draws.push_back(static_cast<double>(unique.sampled_count()));
                    unique_out << name << ',' << n << ',' << t << ',' << unique.sampled_count() << '\n';
                }
                overlap_out << name << ',' << n << ",mean," << format_double(mean_of(overlaps)) << '\n';
                unique_out << name << ',' << n << ",mean," << format_double(mean_of(draws)) << '\n';
                note(name + " n=" + std::to_string(n) + ": overlap " + format_double(mean_of(overlaps)) +
                     ", unique draws " + format_double(mean_of(draws)));
            }
            trained.emplace(name, std::move(model));
        }
    }

    // Precision of the four estimator variants against exact ranks.
    {
        const std::string name = to_string(config.precision_model);
        std::unique_ptr<PasswordModel> own;
        const PasswordModel* model = nullptr;
        if (auto it = trained.find(name); it != trained.end() && std::find(specs.begin(), specs.end(), config.precision_model) != specs.end()) {
            model = it->second.get();
        } else {
            own = train_model(corpus, config.precision_model);
            model = own.get();
        }
        note("enumerating " + name + " to neglog " + format_double(config.oracle_threshold));
        const PrecisionResult res = run_precision(*model, config.precision_sample_size, config.trials,
                                                  config.oracle_threshold, config.seed, config.oracle_budget,
                                                  config.rank_mode);
        const auto& entries = res.list.entries();
        summary.oracle_entries = entries.size();
        summary.variants = res.summary;
        note("oracle list: " + std::to_string(entries.size()) + " passwords");

        std::ofstream t3 = open_output(config.output_dir, "table3_errors.csv", summary.files);
        t3 << "# table3: weighted and simple error of the estimator variants against exact ranks\n"
           << "variant,trial,weighted_error,simple_error\n";
        for (std::size_t v = 0; v < 4; ++v) {
            const auto vname = to_string(kAllVariants[v]);
            for (std::size_t t = 0; t < res.reports[v].size(); ++t) {
                t3 << vname << ',' << t << ',' << format_double(res.reports[v][t].weighted_error) << ','
                   << format_double(res.reports[v][t].simple_error) << '\n';
            }
            t3 << vname << ",mean," << format_double(res.summary[v].mean_weighted_error) << ','
               << format_double(res.summary[v].mean_simple_error) << '\n';
            note(std::string(vname) + ": weighted " + format_double(res.summary[v].mean_weighted_error) +
                 ", simple " + format_double(res.summary[v].mean_simple_error));
        }

        // Per-password mean signed difference and relative error, recomputed
        // from the same seeded tables.
        const std::size_t limit = std::min(config.fig3_limit, entries.size());
        std::vector<double> diff_orig(limit, 0.0), diff_all(limit, 0.0), rel_orig(limit, 0.0), rel_all(limit, 0.0);
        std::size_t fig4_k = 0;
        SampleTable first_plain;
        for (std::size_t t = 0; t < config.trials; ++t) {
            Rng plain_rng(derive_seed(config.seed, kPrecisionPlainStream, t));
            Rng unique_rng(derive_seed(config.seed, kPrecisionUniqueStream, t));
            const SampleTable plain = build_sample(*model, config.precision_sample_size, SampleMode::plain, plain_rng);
            const SampleTable unique = build_sample(*model, config.precision_sample_size, SampleMode::unique, unique_rng);
            for (std::size_t i = 0; i < limit; ++i) {
                const double rr = static_cast<double>(entries[i].rank);
                const double eo = estimate_rank(plain, entries[i].neglog).rank;
                const double ea = estimate_rank(unique, entries[i].neglog, {true, nullptr}).rank;
                diff_orig[i] += eo - rr;
                diff_all[i] += ea - rr;
                rel_orig[i] += std::abs(eo - rr) / std::max(rr, 1.0);
                rel_all[i] += std::abs(ea - rr) / std::max(rr, 1.0);
            }
            if (t == 0) first_plain = plain;
        }
        std::ofstream f3 = open_output(config.output_dir, "fig3_errors.csv", summary.files);
        f3 << "# fig3: per-password mean (estimate - rank) and mean relative error, original vs all\n"
           << "rank,neglog,variant,mean_difference,mean_relative_error\n";
        const double nt = static_cast<double>(config.trials);
        for (std::size_t i = 0; i < limit; ++i) {
            f3 << entries[i].rank << ',' << format_double(entries[i].neglog) << ",original,"
               << format_double(diff_orig[i] / nt) << ',' << format_double(rel_orig[i] / nt) << '\n';
            f3 << entries[i].rank << ',' << format_double(entries[i].neglog) << ",all,"
               << format_double(diff_all[i] / nt) << ',' << format_double(rel_all[i] / nt) << '\n';
        }

        fig4_k = top_k_exact(res.list, first_plain);
        summary.top_k = fig4_k;
        std::ofstream f4 = open_output(config.output_dir, "fig4_topk.csv", summary.files);
        f4 << "# fig4: original estimate vs position in the sample (fixed), trial 0 plain sample\n"
           << "# top_k_exact=" << fig4_k << '\n'
           << "position,real_rank,neglog,original_estimate,fixed_estimate\n";
        const auto neglogs = first_plain.neglogs();
        const std::size_t limit4 = std::min(config.fig4_limit, entries.size());
        for (std::size_t i = 0; i < limit4; ++i) {
            // fixed estimate: number of distinct sampled probabilities above this one
            std::size_t distinct_above = 0;
            const auto end = std::lower_bound(neglogs.begin(), neglogs.end(), entries[i].neglog);
            for (auto it = neglogs.begin(); it != end; ++it) {
                if (it == neglogs.begin() || *it != *(it - 1)) ++distinct_above;
            }
            f4 << i << ',' << entries[i].rank << ',' << format_double(entries[i].neglog) << ','
               << format_double(estimate_rank(first_plain, entries[i].neglog).rank) << ',' << distinct_above << '\n';
        }
        note("top-k exact prefix: " + std::to_string(fig4_k));
    }
    return summary;
}

std::vector<BenchRow> run_speed_benchmark(const PasswordModel& model, const SpeedConfig& config) {
    if (config.sample_sizes.empty()) throw MisuseError("need at least one sample size");
    Rng query_rng(derive_seed(config.seed, kBenchQueryStream, 0));
    std::vector<double> queries;
    queries.reserve(config.queries);
    for (std::size_t i = 0; i < config.queries; ++i) queries.push_back(model.sample(query_rng).neglog);

    std::vector<SampleTable> tables;
    tables.reserve(config.sample_sizes.size());
    for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
        Rng rng(derive_seed(config.seed, kBenchTableStream, s));
        tables.push_back(build_sample(model, config.sample_sizes[s], SampleMode::plain, rng));
    }
    std::vector<BinIndex> bins;
    bins.reserve(tables.size() * config.bin_counts.size());
    std::vector<BenchCase> cases;
    for (std::size_t s = 0; s < tables.size(); ++s) {
        cases.push_back({"original", &tables[s], nullptr});
        for (std::size_t b : config.bin_counts) {
            bins.push_back(build_bins(tables[s], uniform_taus(config.bin_range / static_cast<double>(b), b)));
            cases.push_back({std::to_string(b) + " bins", &tables[s], &bins.back()});
        }
    }
    return bench_estimation(cases, queries, config.repetitions, 0);
}

void write_speed_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "# table4: estimation time relative to plain binary search at the first sample size\n"
        << "sample_size,variant,bins,median_ns_per_query,relative";
    const std::size_t reps = rows.empty() ? 0 : rows.front().ns_per_query.size();
    for (std::size_t r = 0; r < reps; ++r) out << ",rep" << r << "_ns";
    out << '\n';
    for (const auto& row : rows) {
        out << row.table_size << ',' << row.label << ',' << row.bin_count << ',' << format_double(row.median_ns) << ','
            << format_double(row.relative);
        for (double ns : row.ns_per_query) out << ',' << format_double(ns);
        out << '\n';
    }
}

}  // namespace mcrank
