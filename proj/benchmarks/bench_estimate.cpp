#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "mcrank/corpus.hpp"
#include "mcrank/estimator.hpp"
#include "mcrank/experiment.hpp"
#include "mcrank/pcfg.hpp"

namespace {

// PCFG over the bundled ranked list; shared by every benchmark.
const mcrank::PcfgModel& model() {
    static const auto m = [] {
        const auto corpus = mcrank::load_corpus_file(MCRANK_DATA_DIR "/rockyou-75.txt", mcrank::CorpusFormat::ranked);
        return mcrank::train_pcfg(corpus, false);
    }();
    return m;
}

const std::vector<double>& queries() {
    static const auto q = [] {
        mcrank::Rng rng(7);
        std::vector<double> out;
        out.reserve(1 << 16);
        for (int i = 0; i < (1 << 16); ++i) out.push_back(model().sample(rng).neglog);
        return out;
    }();
    return q;
}

mcrank::SampleTable table_of(std::size_t n) {
    mcrank::Rng rng(n);
    return mcrank::build_sample(model(), n, mcrank::SampleMode::plain, rng);
}

void BM_PlainSearch(benchmark::State& state) {
    const auto table = table_of(static_cast<std::size_t>(state.range(0)));
    const auto& q = queries();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcrank::estimate_rank(table, q[i++ & (q.size() - 1)]).rank);
    }
}
BENCHMARK(BM_PlainSearch)->Arg(10'000)->Arg(30'000)->Arg(50'000)->Arg(100'000);

void BM_BinnedSearch(benchmark::State& state) {
    const auto table = table_of(static_cast<std::size_t>(state.range(0)));
    const auto count = static_cast<std::size_t>(state.range(1));
    const auto bins = mcrank::build_bins(table, mcrank::uniform_taus(100.0 / static_cast<double>(count), count));
    const mcrank::EstimateOptions opts{false, &bins};
    const auto& q = queries();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcrank::estimate_rank(table, q[i++ & (q.size() - 1)], opts).rank);
    }
}
BENCHMARK(BM_BinnedSearch)->ArgsProduct({{10'000, 30'000, 50'000, 100'000}, {100, 1000}});

void BM_Interpolated(benchmark::State& state) {
    const auto table = table_of(10'000);
    const mcrank::EstimateOptions opts{true, nullptr};
    const auto& q = queries();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcrank::estimate_rank(table, q[i++ & (q.size() - 1)], opts).rank);
    }
}
BENCHMARK(BM_Interpolated);

void BM_PcfgSample(benchmark::State& state) {
    mcrank::Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(model().sample(rng));
}
BENCHMARK(BM_PcfgSample);

void BM_PcfgNeglog(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(model().neg_log2_prob("monkey123"));
}
BENCHMARK(BM_PcfgNeglog);

}  // namespace

BENCHMARK_MAIN();
