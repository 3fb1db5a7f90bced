#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mcrank/error.hpp"
#include "mcrank/experiment.hpp"
#include "support/oracles.hpp"

using namespace mcrank;
namespace fs = std::filesystem;

TEST(ModelSpecs, Parsing) {
    EXPECT_EQ(parse_model_spec("4-gram").kind, ModelKind::ngram);
    EXPECT_EQ(parse_model_spec("4-gram").order, 4);
    EXPECT_EQ(parse_model_spec("ngram:7").order, 7);
    EXPECT_EQ(parse_model_spec("backoff").threshold, 10u);
    EXPECT_EQ(parse_model_spec("backoff:25").threshold, 25u);
    EXPECT_EQ(parse_model_spec("pcfg").kind, ModelKind::pcfg);
    for (const char* bad : {"", "1-gram", "x-gram", "backoff:0", "backoff:", "lstm", "ngram:", "300-gram"}) {
        EXPECT_THROW(parse_model_spec(bad), ParseError) << bad;
    }
    for (const char* text : {"4-gram", "5-gram", "backoff", "backoff:3", "pcfg"}) {
        EXPECT_EQ(to_string(parse_model_spec(text)), text);
    }
}

TEST(ModelSpecs, DefaultsAndVariants) {
    const auto specs = default_model_specs();
    ASSERT_EQ(specs.size(), 4u);
    EXPECT_EQ(to_string(specs[0]), "4-gram");
    EXPECT_EQ(to_string(specs[3]), "pcfg");
    std::vector<std::string> names;
    for (auto v : kAllVariants) names.emplace_back(to_string(v));
    EXPECT_EQ(names, (std::vector<std::string>{"original", "interpolation", "sampling", "all"}));
}

TEST(Seeds, DerivedStreamsAreDistinctAndStable) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t stream = 0; stream < 8; ++stream) {
        for (std::uint64_t i = 0; i < 500; ++i) seen.insert(derive_seed(42, stream, i));
    }
    EXPECT_EQ(seen.size(), 8u * 500u);
    EXPECT_EQ(derive_seed(42, 1, 2), derive_seed(42, 1, 2));
    EXPECT_NE(derive_seed(42, 1, 2), derive_seed(43, 1, 2));
}

TEST(Precision, VariantsAndTrials) {
    const auto corpus = ref::corpus_of(
        {{"abc12", 9}, {"xyz9", 4}, {"pass", 7}, {"qq!", 2}, {"zz1", 3}, {"hello", 5}, {"a1", 6}, {"b22", 1}});
    const auto model = train_model(corpus, parse_model_spec("pcfg"));
    const auto r = run_precision(*model, 20, 4, 12.0, 9);
    ASSERT_EQ(r.reports.size(), 4u);
    for (const auto& per_variant : r.reports) EXPECT_EQ(per_variant.size(), 4u);
    ASSERT_EQ(r.summary.size(), 4u);
    EXPECT_GT(r.list.size(), 10u);
    for (const auto& s : r.summary) {
        EXPECT_GE(s.mean_weighted_error, 0.0);
        EXPECT_GE(s.mean_simple_error, 0.0);
    }
    const auto again = run_precision(*model, 20, 4, 12.0, 9);
    for (std::size_t v = 0; v < 4; ++v) EXPECT_EQ(again.summary[v].mean_weighted_error, r.summary[v].mean_weighted_error);
}

namespace {

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

ExperimentConfig tiny_config(const fs::path& out) {
    ExperimentConfig c;
    c.seed = 5;
    c.corpus_path = std::string(MCRANK_DATA_DIR) + "/rockyou-75.txt";
    c.corpus_format = CorpusFormat::ranked;
    c.top_n = 2000;
    c.models = {parse_model_spec("2-gram"), parse_model_spec("pcfg")};
    c.sample_sizes = {100, 300};
    c.overlap_trials = 2;
    c.precision_model = parse_model_spec("pcfg");
    c.precision_sample_size = 200;
    c.trials = 2;
    c.oracle_threshold = 12.0;
    c.fig3_limit = 100;
    c.fig4_limit = 50;
    c.output_dir = out.string();
    return c;
}

}  // namespace

TEST(Experiment, SmokeRunIsReproducible) {
    const auto base = fs::temp_directory_path() / "mcrank_experiment_test";
    fs::remove_all(base);
    const auto a = run_experiment(tiny_config(base / "a"));
    run_experiment(tiny_config(base / "b"));
    const auto files_a = read_dir(base / "a");
    const auto files_b = read_dir(base / "b");
    for (const char* name : {"config.txt", "fig1_model_size.csv", "table1_overlap.csv", "table2_unique_draws.csv",
                             "fig2_ranks.csv", "table3_errors.csv", "fig3_errors.csv", "fig4_topk.csv"}) {
        ASSERT_TRUE(files_a.count(name)) << name;
        if (std::string(name) != "config.txt") EXPECT_EQ(files_a.at(name).rfind("# ", 0), 0u) << name;
    }
    EXPECT_EQ(files_a, files_b);
    EXPECT_GT(a.oracle_entries, 0u);
    EXPECT_EQ(a.variants.size(), 4u);

    auto other = tiny_config(base / "c");
    other.seed = 6;
    run_experiment(other);
    EXPECT_NE(read_dir(base / "c").at("table1_overlap.csv"), files_a.at("table1_overlap.csv"));
    fs::remove_all(base);
}

TEST(Experiment, OracleBudgetIsEnforced) {
    const auto base = fs::temp_directory_path() / "mcrank_experiment_budget";
    auto c = tiny_config(base);
    c.oracle_budget = 10;
    EXPECT_THROW(run_experiment(c), BudgetError);
    fs::remove_all(base);
}
