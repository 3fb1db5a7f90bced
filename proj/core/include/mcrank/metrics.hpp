#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcrank/estimator.hpp"
#include "mcrank/oracle.hpp"

namespace mcrank {

// 1 - (distinct values) / n over raw draws or table entries.
double overlap(std::span<const double> neglogs);
inline double overlap(const SampleTable& table) { return overlap(table.neglogs()); }

struct RelativeErrorPoint {
    std::uint64_t true_rank = 0;
    double mean_relative_error = 0.0;
};

struct ErrorReport {
    // sum over T of p * |er - rr|; p = 2^-neglog, not renormalized over T
    double weighted_error = 0.0;
    // mean over T of |er - rr|
    double simple_error = 0.0;
    // |er - rr| / max(rr, 1), averaged within each tie group
    std::vector<RelativeErrorPoint> relative_error_by_rank;
    std::size_t trials = 1;
};

// estimates[i] is the estimated rank of list.entries()[i]. Throws InputError
// naming the first password without an estimate when the span is short.
ErrorReport error_report(const RankedList& list, std::span<const double> estimates);
ErrorReport error_report(const RankedList& list, const std::unordered_map<std::string, double>& estimates);

// Componentwise mean of reports over the same list; trials is the sum.
ErrorReport average_reports(std::span<const ErrorReport> reports);

// Length of the leading run of distinct table probabilities that coincide,
// in order, with the list's leading probability groups, where the i-th value
// (1-based) must have exact rank i-1. This is how far table position alone
// gives exact ranks.
std::size_t top_k_exact(const RankedList& list, const SampleTable& table);

struct BenchCase {
    std::string label;
    const SampleTable* table = nullptr;
    const BinIndex* bins = nullptr;
};

struct BenchRow {
    std::string label;
    std::size_t table_size = 0;
    std::size_t bin_count = 0;             // 0 for plain search
    std::vector<double> ns_per_query;      // one value per repetition
    double median_ns = 0.0;
    double relative = 0.0;                 // median_ns / baseline median_ns
};

// Times stepped estimate_rank over all queries, repetitions interleaved
// across cases. Case baseline_index defines relative = 1.
std::vector<BenchRow> bench_estimation(std::span<const BenchCase> cases, std::span<const double> queries,
                                       int repetitions, std::size_t baseline_index = 0);

}  // namespace mcrank
