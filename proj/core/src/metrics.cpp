#include "mcrank/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include "mcrank/error.hpp"

namespace mcrank {

double overlap(std::span<const double> neglogs) {
    if (neglogs.empty()) throw MisuseError("overlap of an empty sample");
    const std::unordered_set<double> distinct(neglogs.begin(), neglogs.end());
    return 1.0 - static_cast<double>(distinct.size()) / static_cast<double>(neglogs.size());
}

ErrorReport error_report(const RankedList& list, std::span<const double> estimates) {
    const auto& entries = list.entries();
    if (estimates.size() < entries.size()) {
        throw InputError("missing estimate for password '" + entries[estimates.size()].password + "'");
    }
    ErrorReport report;
    if (entries.empty()) return report;

    double weighted = 0.0;
    double simple = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double rr = static_cast<double>(entries[i].rank);
        const double diff = std::abs(estimates[i] - rr);
        weighted += std::exp2(-entries[i].neglog) * diff;
        simple += diff;

        const double rel = diff / std::max(rr, 1.0);
        if (report.relative_error_by_rank.empty() || report.relative_error_by_rank.back().true_rank != entries[i].rank) {
            report.relative_error_by_rank.push_back({entries[i].rank, 0.0});
        }
        report.relative_error_by_rank.back().mean_relative_error += rel;
    }
    // turn per-rank sums into means
    std::size_t i = 0;
    for (auto& point : report.relative_error_by_rank) {
        std::size_t members = 0;
        while (i < entries.size() && entries[i].rank == point.true_rank) {
            ++members;
            ++i;
        }
        point.mean_relative_error /= static_cast<double>(members);
    }
    report.weighted_error = weighted;
    report.simple_error = simple / static_cast<double>(entries.size());
    return report;
}

ErrorReport error_report(const RankedList& list, const std::unordered_map<std::string, double>& estimates) {
    std::vector<double> aligned;
    aligned.reserve(list.size());
    for (const auto& e : list.entries()) {
        auto it = estimates.find(e.password);
        if (it == estimates.end()) throw InputError("missing estimate for password '" + e.password + "'");
        aligned.push_back(it->second);
    }
    return error_report(list, aligned);
}

ErrorReport average_reports(std::span<const ErrorReport> reports) {
    if (reports.empty()) throw MisuseError("no reports to average");
    ErrorReport mean;
    mean.trials = 0;
    mean.relative_error_by_rank = reports.front().relative_error_by_rank;
    for (auto& p : mean.relative_error_by_rank) p.mean_relative_error = 0.0;
    for (const auto& r : reports) {
        if (r.relative_error_by_rank.size() != mean.relative_error_by_rank.size()) {
            throw MisuseError("reports were computed over different lists");
        }
        mean.weighted_error += r.weighted_error;
        mean.simple_error += r.simple_error;
        for (std::size_t i = 0; i < r.relative_error_by_rank.size(); ++i) {
            mean.relative_error_by_rank[i].mean_relative_error += r.relative_error_by_rank[i].mean_relative_error;
        }
        mean.trials += r.trials;
    }
    const double n = static_cast<double>(reports.size());
    mean.weighted_error /= n;
    mean.simple_error /= n;
    for (auto& p : mean.relative_error_by_rank) p.mean_relative_error /= n;
    return mean;
}

std::size_t top_k_exact(const RankedList& list, const SampleTable& table) {
    const auto& entries = list.entries();
    const auto neglogs = table.neglogs();
    std::size_t k = 0;
    std::size_t pos = 0;
    std::size_t entry = 0;
    while (pos < neglogs.size()) {
        const double v = neglogs[pos];
        if (entry >= entries.size() || entries[entry].neglog != v || entries[entry].rank != k) break;
        ++k;
        while (pos < neglogs.size() && neglogs[pos] == v) ++pos;
        while (entry < entries.size() && entries[entry].neglog == v) ++entry;
    }
    return k;
}

std::vector<BenchRow> bench_estimation(std::span<const BenchCase> cases, std::span<const double> queries,
                                       int repetitions, std::size_t baseline_index) {
    if (cases.empty() || baseline_index >= cases.size()) throw MisuseError("bad benchmark case list");
    if (repetitions < 1) throw MisuseError("repetitions must be positive");
    if (queries.empty()) throw MisuseError("benchmark needs queries");

    std::vector<BenchRow> rows(cases.size());
    for (std::size_t c = 0; c < cases.size(); ++c) {
        rows[c].label = cases[c].label;
        rows[c].table_size = cases[c].table->size();
        rows[c].bin_count = cases[c].bins ? cases[c].bins->bin_count() : 0;
    }
    volatile double sink = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const EstimateOptions opts{false, cases[c].bins};
            double acc = 0.0;
            const auto start = std::chrono::steady_clock::now();
            for (double q : queries) acc += estimate_rank(*cases[c].table, q, opts).rank;
            const auto stop = std::chrono::steady_clock::now();
            sink = sink + acc;
            const double ns = std::chrono::duration<double, std::nano>(stop - start).count();
            rows[c].ns_per_query.push_back(ns / static_cast<double>(queries.size()));
        }
    }
    for (auto& row : rows) {
        auto sorted = row.ns_per_query;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t m = sorted.size();
        row.median_ns = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    }
    const double base = rows[baseline_index].median_ns;
    for (auto& row : rows) row.relative = row.median_ns / base;
    return rows;
}

}  // namespace mcrank
