// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
//
// Criteria 3-6 use a real password corpus. The bundled frequency-ranked list
// is used unless MCRANK_CORPUS names another file (MCRANK_CORPUS_FORMAT:
// plain, counted or ranked; default plain). Ranked lists carry no counts, so
// models are trained unweighted on them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcrank/backoff.hpp"
#include "mcrank/corpus.hpp"
#include "mcrank/csv.hpp"
#include "mcrank/estimator.hpp"
#include "mcrank/experiment.hpp"
#include "mcrank/metrics.hpp"
#include "mcrank/ngram.hpp"
#include "mcrank/oracle.hpp"
#include "mcrank/pcfg.hpp"
#include "support/oracles.hpp"

namespace {

using namespace mcrank;
using ref::corpus_of;

constexpr std::uint64_t kSeed = 20'240'611;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

std::string pct(double v) { return fmt(100.0 * v, 3) + "%"; }

struct RealCorpus {
    PasswordCorpus corpus;
    bool weighted = true;
    std::string label;
};

const RealCorpus& real_corpus() {
    static const RealCorpus c = [] {
        RealCorpus out;
        const char* path = std::getenv("MCRANK_CORPUS");
        if (path && *path) {
            const char* f = std::getenv("MCRANK_CORPUS_FORMAT");
            const auto format = parse_corpus_format(f && *f ? f : "plain");
            out.corpus = load_corpus_file(path, format);
            out.weighted = format != CorpusFormat::ranked;
            out.label = path;
        } else {
            out.corpus = load_corpus_file(MCRANK_DATA_DIR "/rockyou-75.txt", CorpusFormat::ranked);
            out.weighted = false;
            out.label = "bundled rockyou-75";
        }
        out.label += " (" + std::to_string(out.corpus.size()) + " passwords, " +
                     (out.weighted ? "weighted" : "unweighted") + ")";
        return out;
    }();
    return c;
}

std::vector<ModelSpec> four_models() { return default_model_specs(real_corpus().weighted); }

// ---------------------------------------------------------------------------

Outcome formula_fidelity() {
    // p = 1/2, 1/4, 1/8 -> c = [2/3, 2, 14/3]
    const auto t = SampleTable::from_draws({1.0, 2.0, 3.0}, 3);
    const double expected[] = {2.0 / 3.0, 2.0, 14.0 / 3.0};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(t.cumranks()[i] - expected[i]) / expected[i]);
    const double r = estimate_rank(t, std::log2(5.0)).rank;
    Outcome o;
    o.pass = worst <= 1e-12 && r == 2.0;
    o.detail = "max relative deviation " + fmt(worst) + ", rank(p=1/5) = " + format_double(r);
    return o;
}

Outcome binned_equivalence() {
    std::mt19937_64 gen(derive_seed(kSeed, 2, 0));
    std::uniform_real_distribution<double> cont(0.0, 60.0);
    std::uniform_int_distribution<int> grid(0, 600);
    std::uniform_int_distribution<int> pick4(0, 3);
    std::uniform_real_distribution<double> wide(0.0, 110.0);
    std::size_t checked = 0, mismatches = 0;
    for (std::size_t n : {1'000u, 10'000u, 100'000u}) {
        std::vector<double> draws(n);
        for (auto& d : draws) {
            switch (pick4(gen)) {
                case 0:
                case 1:
                    d = cont(gen);
                    break;
                case 2:  // on the 0.1 bin grid, bit-equal to the thresholds
                    d = static_cast<double>(grid(gen)) * 0.1;
                    break;
                default:
                    d = std::floor(cont(gen));
            }
        }
        const auto table = SampleTable::from_draws(draws, n);
        std::uniform_int_distribution<std::size_t> any_entry(0, n - 1);
        for (std::size_t count : {100u, 1'000u}) {
            const auto taus = uniform_taus(100.0 / static_cast<double>(count), count);
            const auto bins = build_bins(table, taus);
            std::uniform_int_distribution<std::size_t> any_tau(0, taus.size() - 1);
            for (int i = 0; i < 100'000; ++i) {
                double q = 0.0;
                switch (i % 5) {
                    case 0:
                        q = table.neglogs()[any_entry(gen)];
                        break;
                    case 1:
                        q = taus[any_tau(gen)];
                        break;
                    case 2:
                        q = std::nextafter(taus[any_tau(gen)], i % 2 ? 0.0 : 200.0);
                        break;
                    case 3:
                        q = wide(gen);
                        break;
                    default:
                        q = i % 1000 == 4 ? kInfiniteNeglog : cont(gen);
                }
                for (bool interp : {false, true}) {
                    const auto full = estimate_rank(table, q, {.interpolate = interp});
                    const auto fast = estimate_rank(table, q, {.interpolate = interp, .bins = &bins});
                    ++checked;
                    if (full.rank != fast.rank || full.index != fast.index) ++mismatches;
                }
            }
        }
    }
    return {mismatches == 0, std::to_string(checked) + " lookups, " + std::to_string(mismatches) + " mismatches"};
}

Outcome speed_up() {
    const auto model = train_pcfg(real_corpus().corpus, real_corpus().weighted);
    SpeedConfig cfg;
    cfg.seed = kSeed;
    cfg.sample_sizes = {10'000, 100'000};
    cfg.bin_counts = {100, 1'000};
    cfg.queries = 1'000'000;
    cfg.repetitions = 10;
    const auto rows = run_speed_benchmark(model, cfg);
    double plain = 0.0, binned = 0.0;
    std::string table;
    for (const auto& r : rows) {
        table += " " + std::to_string(r.table_size) + "/" + std::to_string(r.bin_count) + "=" + fmt(r.relative, 3);
        if (r.table_size == 100'000 && r.bin_count == 0) plain = r.median_ns;
        if (r.table_size == 100'000 && r.bin_count == 1'000) binned = r.median_ns;
    }
    const double speedup = plain / binned;
    return {speedup >= 1.5, "n=100000: plain " + fmt(plain) + " ns, 1000 bins " + fmt(binned) + " ns, speed-up " +
                                fmt(speedup, 3) + "x (need >= 1.5x); relative (size/bins):" + table};
}

struct TrainedModels {
    std::vector<ModelSpec> specs;
    std::vector<std::unique_ptr<PasswordModel>> models;
};

const TrainedModels& top50k_models() {
    static const TrainedModels t = [] {
        TrainedModels out;
        const auto part = top_n(real_corpus().corpus, 50'000);
        out.specs = four_models();
        for (const auto& s : out.specs) out.models.push_back(train_model(part, s));
        return out;
    }();
    return t;
}

bool strictly_ordered(const std::vector<double>& ascending) {
    for (std::size_t i = 1; i < ascending.size(); ++i) {
        if (!(ascending[i - 1] < ascending[i])) return false;
    }
    return true;
}

Outcome overlap_behavior() {
    const auto& tm = top50k_models();
    const std::size_t sizes[] = {10'000, 30'000, 50'000};
    std::vector<std::vector<double>> mean(tm.models.size(), std::vector<double>(3));
    for (std::size_t m = 0; m < tm.models.size(); ++m) {
        for (std::size_t s = 0; s < 3; ++s) {
            double acc = 0.0;
            for (std::size_t run = 0; run < 3; ++run) {
                Rng rng(derive_seed(kSeed, 40 + m, s * 3 + run));
                acc += overlap(build_sample(*tm.models[m], sizes[s], SampleMode::plain, rng));
            }
            mean[m][s] = acc / 3.0;
        }
    }
    // specs are 4-gram, 5-gram, backoff, pcfg
    const bool ordered = strictly_ordered({mean[0][0], mean[1][0], mean[2][0], mean[3][0]});
    bool growing = true;
    for (const auto& row : mean) growing = growing && strictly_ordered(row);
    std::string detail;
    for (std::size_t m = 0; m < tm.models.size(); ++m) {
        detail += to_string(tm.specs[m]) + " " + pct(mean[m][0]) + "/" + pct(mean[m][1]) + "/" + pct(mean[m][2]) + "; ";
    }
    detail += std::string("order pcfg>backoff>5-gram>4-gram at 10000: ") + (ordered ? "yes" : "no") +
              ", increasing in n: " + (growing ? "yes" : "no");

    bool published_ok = true;
    if (real_corpus().corpus.size() >= 500'000) {
        // Reported means for 500,000 training passwords at n = 10k/30k/50k.
        const double reported[4][3] = {
            {0.136, 0.206, 0.248}, {0.165, 0.258, 0.305}, {0.204, 0.316, 0.373}, {0.446, 0.608, 0.671}};
        const auto part = top_n(real_corpus().corpus, 500'000);
        double worst = 0.0;
        const auto specs = four_models();
        for (std::size_t m = 0; m < specs.size(); ++m) {
            const auto model = train_model(part, specs[m]);
            for (std::size_t s = 0; s < 3; ++s) {
                double acc = 0.0;
                for (std::size_t run = 0; run < 3; ++run) {
                    Rng rng(derive_seed(kSeed, 48 + m, s * 3 + run));
                    acc += overlap(build_sample(*model, sizes[s], SampleMode::plain, rng));
                }
                worst = std::max(worst, std::abs(acc / 3.0 - reported[m][s]));
            }
        }
        published_ok = worst <= 0.03;
        detail += "; 500k-scale max deviation " + fmt(100.0 * worst, 3) + " points (need <= 3)";
    } else {
        detail += "; 500k-scale comparison not applicable";
    }
    return {ordered && growing && published_ok, detail};
}

Outcome unique_sampling() {
    const auto& tm = top50k_models();
    const std::size_t targets[] = {10'000, 30'000, 50'000};
    std::vector<std::vector<double>> draws(tm.models.size(), std::vector<double>(3));
    bool zero_overlap = true;
    for (std::size_t m = 0; m < tm.models.size(); ++m) {
        for (std::size_t s = 0; s < 3; ++s) {
            double acc = 0.0;
            for (std::size_t run = 0; run < 3; ++run) {
                Rng rng(derive_seed(kSeed, 50 + m, s * 3 + run));
                const auto t = build_sample(*tm.models[m], targets[s], SampleMode::unique, rng,
                                            {.max_draws = 50'000'000});
                zero_overlap = zero_overlap && overlap(t) == 0.0 && t.size() == targets[s];
                acc += static_cast<double>(t.sampled_count());
            }
            draws[m][s] = acc / 3.0;
        }
    }
    bool ordered = true;
    std::string detail;
    for (std::size_t s = 0; s < 3; ++s) {
        ordered = ordered && strictly_ordered({draws[0][s], draws[1][s], draws[2][s], draws[3][s]});
    }
    for (std::size_t m = 0; m < tm.models.size(); ++m) {
        detail += to_string(tm.specs[m]) + " " + fmt(draws[m][0], 7) + "/" + fmt(draws[m][1], 7) + "/" +
                  fmt(draws[m][2], 7) + "; ";
    }
    detail += std::string("overlap 0: ") + (zero_overlap ? "yes" : "no") +
              ", order pcfg>backoff>5-gram>4-gram: " + (ordered ? "yes" : "no");
    return {zero_overlap && ordered, detail};
}

Outcome precision_ordering() {
    const auto& rc = real_corpus();
    ModelSpec spec = parse_model_spec("pcfg");
    spec.weighted = rc.weighted;
    const auto model = train_model(rc.corpus, spec);

    // smallest threshold (0.5 steps) that yields at least 20,000 passwords
    double threshold = 10.0;
    std::size_t entries = 0;
    while (threshold <= 40.0) {
        entries = build_ranked_list(*model, threshold, 5'000'000).size();
        if (entries >= 20'000) break;
        threshold += 0.5;
    }
    const auto result = run_precision(*model, 10'000, 50, threshold, kSeed);
    const auto& s = result.summary;  // original, interpolation, sampling, all
    const double original = s[0].mean_weighted_error;
    const double sampling = s[2].mean_weighted_error;
    const double all = s[3].mean_weighted_error;
    const bool enough_data = rc.corpus.size() >= 100'000;
    const bool sampling_ok = sampling <= original;
    const bool all_ok = all <= 1.1 * sampling;
    std::string detail = "threshold " + fmt(threshold) + " -> " + std::to_string(result.list.size()) +
                         " passwords, 50 trials; weighted error original " + fmt(original) + ", interpolation " +
                         fmt(s[1].mean_weighted_error) + ", sampling " + fmt(sampling) + ", all " + fmt(all) +
                         "; sampling<=original: " + (sampling_ok ? "yes" : "no") +
                         ", all<=1.1*sampling: " + (all_ok ? "yes" : "no");
    if (!enough_data) {
        detail += "; precondition unmet: training set has " + std::to_string(rc.corpus.size()) +
                  " < 100000 passwords (set MCRANK_CORPUS)";
    }
    return {enough_data && entries >= 20'000 && sampling_ok && all_ok, detail};
}

// Finite support: 33 passwords.
PcfgModel tiny_pcfg() {
    return train_pcfg(corpus_of({{"ab1", 5}, {"cd2", 3}, {"ab22", 2}, {"xy!", 4}, {"zz", 1}, {"q1", 2}, {"cd", 3},
                                 {"ef9", 1}}));
}

Outcome estimator_statistics() {
    const auto model = tiny_pcfg();
    const auto list = build_ranked_list(model, 64.0);
    double mass = 0.0;
    for (const auto& e : list.entries()) mass += std::exp2(-e.neglog);
    if (list.size() > 100 || std::abs(mass - 1.0) > 1e-9) return {false, "tiny model is not exhaustively enumerable"};

    // Unbiasedness at three queries spread over the list.
    std::string detail = std::to_string(list.size()) + " passwords; ";
    bool unbiased = true;
    for (std::size_t pos : {list.size() / 5, list.size() / 2, list.size() - 1}) {
        const auto& e = list.entries()[pos];
        double sum = 0.0, sum_sq = 0.0;
        const int tables = 1'000;
        for (int k = 0; k < tables; ++k) {
            Rng rng(derive_seed(kSeed, 70, static_cast<std::uint64_t>(k)));
            const double r = estimate_rank(build_sample(model, 100, SampleMode::plain, rng), e.neglog).rank;
            sum += r;
            sum_sq += r * r;
        }
        const double mean = sum / tables;
        const double var = (sum_sq - tables * mean * mean) / (tables - 1);
        const double se = std::sqrt(std::max(var, 0.0) / tables);
        const double dev = std::abs(mean - static_cast<double>(e.rank));
        const bool ok = se > 0.0 ? dev <= 4.0 * se : dev == 0.0;
        unbiased = unbiased && ok;
        detail += "rank " + std::to_string(e.rank) + ": mean " + fmt(mean) + " (" + fmt(se > 0 ? dev / se : 0.0, 3) +
                  " SE); ";
    }

    // Convergence of the mean relative error.
    std::vector<double> mre;
    for (std::size_t n : {100u, 1'000u, 10'000u}) {
        double acc = 0.0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(derive_seed(kSeed, 71 + n, seed));
            const auto table = build_sample(model, n, SampleMode::plain, rng);
            double rel = 0.0;
            for (const auto& e : list.entries()) {
                const double er = estimate_rank(table, e.neglog).rank;
                rel += std::abs(er - static_cast<double>(e.rank)) / std::max(1.0, static_cast<double>(e.rank));
            }
            acc += rel / static_cast<double>(list.size());
        }
        mre.push_back(acc / 100.0);
    }
    const bool converging = mre[0] > mre[1] && mre[1] > mre[2];
    detail += "mean relative error n=100/1000/10000: " + fmt(mre[0]) + "/" + fmt(mre[1]) + "/" + fmt(mre[2]);
    return {unbiased && converging, detail};
}

struct TinyModel {
    std::unique_ptr<PasswordModel> model;
    std::string alphabet;
};

std::vector<TinyModel> tiny_models() {
    std::vector<TinyModel> out;
    out.push_back({std::make_unique<NGramModel>(train_ngram(corpus_of({{"ab", 1}, {"ac", 1}}), 2, false)), "abc"});
    out.push_back({std::make_unique<NGramModel>(
                       train_ngram(corpus_of({{"ab", 5}, {"aab", 3}, {"ba", 2}, {"b", 1}, {"cab", 2}}), 2, true)),
                   "abc"});
    out.push_back({std::make_unique<NGramModel>(train_ngram(
                       corpus_of({{"abc1", 2}, {"1cba", 2}, {"a1", 4}, {"1a", 1}, {"aa", 1}}), 3, false)),
                   "abc1"});
    out.push_back({std::make_unique<BackoffModel>(train_backoff(
                       corpus_of({{"ab", 2}, {"b", 1}, {"bba", 4}, {"aab", 3}, {"cc", 1}}), 3, true)),
                   "abc"});
    out.push_back({std::make_unique<BackoffModel>(
                       train_backoff(corpus_of({{"ab", 1}, {"ba", 2}, {"abba", 5}, {"b", 1}}), 1, false)),
                   "ab"});
    out.push_back({std::make_unique<PcfgModel>(train_pcfg(
                       corpus_of({{"ab1", 3}, {"b11", 1}, {"a1", 2}, {"ba", 2}, {"1a", 1}, {"c", 1}}), true)),
                   "abc1"});
    out.push_back({std::make_unique<PcfgModel>(train_pcfg(corpus_of({{"a", 4}, {"b", 2}, {"c", 1}, {"d", 1}}))),
                   "abcd"});
    return out;
}

Outcome oracle_correctness() {
    std::size_t lists = 0, entries = 0;
    for (const auto& tm : tiny_models()) {
        const auto candidates = ref::all_strings(tm.alphabet, 8);
        for (double threshold : {1.0, 3.0, 5.0, 8.0}) {
            const auto scored = ref::brute_force_enumerate(*tm.model, candidates, threshold);
            for (const auto& s : scored) {
                if (s.password.size() >= 8) return {false, "depth 8 does not exhaust " + tm.model->describe()};
            }
            for (RankMode mode : {RankMode::group, RankMode::positional}) {
                std::vector<RankedEntry> expected;
                for (std::size_t i = 0; i < scored.size(); ++i) {
                    std::uint64_t rank = i;
                    if (mode == RankMode::group) {
                        rank = static_cast<std::uint64_t>(
                            std::count_if(scored.begin(), scored.end(),
                                          [&](const ref::Scored& o) { return o.neglog < scored[i].neglog; }));
                    }
                    expected.push_back({scored[i].password, scored[i].neglog, rank});
                }
                const auto list = build_ranked_list(*tm.model, threshold, kDefaultEntryBudget, mode);
                if (list.entries() != expected) {
                    return {false, tm.model->describe() + " differs at threshold " + fmt(threshold)};
                }
                ++lists;
                entries += expected.size();
            }
        }
    }
    return {true, std::to_string(lists) + " lists (" + std::to_string(entries) + " entries) equal brute force"};
}

Outcome model_soundness() {
    std::string detail;
    bool ok = true;

    // normalization over finite supports
    std::vector<std::pair<std::unique_ptr<PasswordModel>, std::string>> finite;
    finite.emplace_back(std::make_unique<NGramModel>(train_ngram(corpus_of({{"ab", 1}, {"ba", 2}, {"bb", 5}}), 3, true)),
                        "ab");
    finite.emplace_back(std::make_unique<NGramModel>(
                            train_ngram(corpus_of({{"abcd", 1}, {"dcba", 1}, {"ad", 4}, {"da", 2}}), 3, true)),
                        "abcd");
    finite.emplace_back(std::make_unique<BackoffModel>(
                            train_backoff(corpus_of({{"aab", 3}, {"bab", 1}, {"a", 2}, {"bb", 7}}), 1, true)),
                        "ab");
    finite.emplace_back(std::make_unique<PcfgModel>(tiny_pcfg()), "");
    double worst_mass = 0.0;
    for (const auto& [m, alphabet] : finite) {
        double mass = 0.0;
        if (alphabet.empty()) {
            const auto list = build_ranked_list(*m, 64.0);
            for (const auto& e : list.entries()) mass += std::exp2(-e.neglog);
        } else {
            mass = ref::exhaustive_mass(*m, alphabet, 6);
        }
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
    ok = ok && worst_mass <= 1e-9;
    detail += "max |sum p - 1| " + fmt(worst_mass) + "; ";

    // chi-square on small supports
    std::vector<std::unique_ptr<PasswordModel>> small;
    small.push_back(std::make_unique<NGramModel>(
        train_ngram(corpus_of({{"abc", 3}, {"acb", 1}, {"b", 2}, {"cab", 7}, {"ba", 4}}), 3, true)));
    small.push_back(std::make_unique<BackoffModel>(
        train_backoff(corpus_of({{"ab", 3}, {"ba", 2}, {"abba", 5}, {"b", 4}, {"aa", 1}}), 1, true)));
    small.push_back(std::make_unique<PcfgModel>(train_pcfg(corpus_of({{"ab1", 3}, {"cd2", 1}, {"xyz", 4}, {"a!", 2}}))));
    for (std::size_t k = 0; k < small.size(); ++k) {
        const auto& m = *small[k];
        std::map<std::string, double> expected;
        const auto list = build_ranked_list(m, 64.0);
        for (const auto& e : list.entries()) expected[e.password] = std::exp2(-e.neglog);
        Rng rng(derive_seed(kSeed, 90, k));
        std::map<std::string, std::size_t> observed;
        const std::size_t draws = 10'000;
        bool consistent = expected.size() >= 2 && expected.size() <= 11;
        for (std::size_t i = 0; i < draws; ++i) {
            const auto s = m.sample(rng);
            consistent = consistent && s.neglog == m.neg_log2_prob(s.password) && expected.count(s.password);
            ++observed[s.password];
        }
        const double chi = ref::chi_square(observed, expected, draws);
        const double crit = ref::chi_square_critical_001(expected.size() - 1);
        ok = ok && consistent && chi < crit;
        detail += m.describe() + " chi2 " + fmt(chi) + " < " + fmt(crit) + "; ";
    }

    // round trip
    bool round_trip = true;
    const auto real = top_n(real_corpus().corpus, 2'000);
    for (const auto& spec : four_models()) {
        const auto m = train_model(real, spec);
        std::ostringstream out;
        m->save(out);
        std::istringstream in(out.str());
        const auto back = load_model(in);
        std::ostringstream again;
        back->save(again);
        round_trip = round_trip && again.str() == out.str() && out.str().size() == m->size_bytes();
        for (std::size_t i = 0; i < real.size(); i += 7) {
            const auto& pw = real.entries()[i].password;
            round_trip = round_trip && back->neg_log2_prob(pw) == m->neg_log2_prob(pw);
        }
    }
    ok = ok && round_trip;
    detail += std::string("model round trip exact: ") + (round_trip ? "yes" : "no") + "; ";

    Rng rng(derive_seed(kSeed, 91, 0));
    const auto table = build_sample(tiny_pcfg(), 10'000, SampleMode::plain, rng);
    std::ostringstream tout;
    save_table(table, tout);
    std::istringstream tin(tout.str());
    const bool table_exact = load_table(tin) == table;
    const std::size_t payload = tout.str().size() - 40;
    ok = ok && table_exact && payload == 160'000;
    detail += "table payload " + std::to_string(payload) + " bytes, round trip " + (table_exact ? "exact" : "lossy");
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "formula fidelity", formula_fidelity},
        {2, "binned equivalence", binned_equivalence},
        {3, "binned speed-up", speed_up},
        {4, "overlap behavior", overlap_behavior},
        {5, "unique-mode sampling", unique_sampling},
        {6, "precision ordering", precision_ordering},
        {7, "estimator statistics", estimator_statistics},
        {8, "oracle correctness", oracle_correctness},
        {9, "model soundness", model_soundness},
    };
    // MCRANK_ACCEPTANCE_ONLY="1,2,8" runs a subset.
    std::set<int> only;
    if (const char* sel = std::getenv("MCRANK_ACCEPTANCE_ONLY")) {
        std::istringstream in(sel);
        for (std::string tok; std::getline(in, tok, ',');) only.insert(std::stoi(tok));
    }
    std::cout << "corpus: " << real_corpus().label << std::endl;
    int failures = 0, ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", " << fmt(secs, 3)
                  << " s): " << o.detail << std::endl;
    }
    std::cout << (ran - failures) << "/" << ran << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
