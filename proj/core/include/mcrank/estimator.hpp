#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcrank/model.hpp"

namespace mcrank {

// Sorted sample of model passwords: neglogs ascending (probabilities
// descending) and the cumulative rank estimate
//   cumranks[i] = (1 / n_effective) * sum_{k <= i} 2^neglogs[k].
// Immutable once built.
class SampleTable {
public:
    SampleTable() = default;

    // Sorts the draws and computes cumulative ranks with n_effective equal to
    // the number of draws. Throws MisuseError on empty or non-finite input.
    static SampleTable from_draws(std::vector<double> neglogs, std::uint64_t sampled_count);

    // Adopts precomputed arrays after validating the table invariants.
    static SampleTable from_arrays(std::vector<double> neglogs, std::vector<double> cumranks,
                                   std::uint64_t n_effective, std::uint64_t sampled_count);

    std::span<const double> neglogs() const noexcept { return neglogs_; }
    std::span<const double> cumranks() const noexcept { return cumranks_; }
    std::size_t size() const noexcept { return neglogs_.size(); }
    bool empty() const noexcept { return neglogs_.empty(); }
    std::uint64_t n_effective() const noexcept { return n_effective_; }
    std::uint64_t sampled_count() const noexcept { return sampled_count_; }
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

    friend bool operator==(const SampleTable&, const SampleTable&) = default;

private:
    std::vector<double> neglogs_;
    std::vector<double> cumranks_;
    std::uint64_t n_effective_ = 0;
    std::uint64_t sampled_count_ = 0;
    std::uint64_t fingerprint_ = 0;
};

enum class SampleMode {
    plain,   // n draws with replacement
    unique,  // draw until n distinct probabilities, then compress
};

SampleMode parse_sample_mode(std::string_view name);

struct SampleOptions {
    // Upper bound on draws; 0 selects max(1'000'000, 100 * n).
    std::uint64_t max_draws = 0;
};

// Draws with infinite neglog are rejected and redrawn; they count towards
// sampled_count but not n_effective. Throws BudgetError when max_draws is
// exhausted first.
SampleTable build_sample(const PasswordModel& model, std::size_t n, SampleMode mode, Rng& rng,
                         const SampleOptions& options = {});

// Collapses every run of equal neglogs to one entry carrying the run's last
// cumulative rank. Stepped estimates are unchanged.
SampleTable compress(const SampleTable& table);

// Bin layout over neglog values: bin i covers [taus[i-1], taus[i]) with
// taus[-1] = 0 and taus[t-1] = infinity. lo/hi bound the positions a binary
// search can return for queries in the bin. Since hi[i] == lo[i+1] both are
// views of one array of t + 1 boundaries.
class BinIndex {
public:
    std::span<const double> taus() const noexcept { return taus_; }
    std::span<const std::uint32_t> lo() const noexcept { return {bounds_.data(), bin_count()}; }
    std::span<const std::uint32_t> hi() const noexcept { return {bounds_.data() + 1, bin_count()}; }
    std::size_t bin_count() const noexcept { return bounds_.empty() ? 0 : bounds_.size() - 1; }
    std::uint64_t table_fingerprint() const noexcept { return table_fingerprint_; }
    bool uniform() const noexcept { return uniform_width_ > 0.0; }

    // Bin containing the query neglog (NaN is rejected by the caller).
    std::size_t locate(double query_neglog) const noexcept;

    // Bytes held by the boundary array.
    std::size_t memory_bytes() const noexcept { return bounds_.size() * sizeof(std::uint32_t); }

private:
    friend BinIndex build_bins(const SampleTable&, std::vector<double>);

    std::vector<double> taus_;
    std::vector<std::uint32_t> bounds_;
    std::uint64_t table_fingerprint_ = 0;
    double uniform_width_ = 0.0;
    double inverse_width_ = 0.0;
};

// Throws MisuseError unless taus are finite, positive and strictly ascending.
BinIndex build_bins(const SampleTable& table, std::vector<double> taus);

// Thresholds width, 2*width, ..., (count-1)*width: count bins in total, the
// last one open-ended.
std::vector<double> uniform_taus(double width, std::size_t count);

struct EstimateOptions {
    bool interpolate = false;
    const BinIndex* bins = nullptr;
};

struct RankEstimate {
    double rank = 0.0;
    // Number of table entries strictly more probable than the query.
    std::size_t index = 0;
    bool interpolated = false;
    std::optional<std::uint32_t> bin;
};

// Stepped estimate c_j for j = #{entries with neglog < query}; c_0 = 0.
// Interpolation blends log2(c_j) and log2(c_{j+1}) linearly in neglog and
// only applies for 1 <= j < n and finite queries. Throws MisuseError for a
// NaN query or bins built over a different table.
RankEstimate estimate_rank(const SampleTable& table, double query_neglog, const EstimateOptions& options = {});

void save_table(const SampleTable& table, std::ostream& out);
SampleTable load_table(std::istream& in);
void save_table_file(const SampleTable& table, const std::string& path);
SampleTable load_table_file(const std::string& path);

// CSV with header "index,neglog,cumrank" (index is 1-based).
void write_table_csv(const SampleTable& table, std::ostream& out);

}  // namespace mcrank
