#include "mcrank/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "binary_io.hpp"
#include "mcrank/csv.hpp"
#include "mcrank/error.hpp"

namespace mcrank {

namespace {

std::uint64_t fingerprint_of(std::span<const double> neglogs) {
    const auto bytes = std::as_bytes(neglogs);
    const std::span<const unsigned char> raw(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
    std::uint64_t h = detail::fnv1a(raw);
    const std::uint64_t n = neglogs.size();
    for (int i = 0; i < 8; ++i) {
        h ^= (n >> (8 * i)) & 0xFF;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

SampleMode parse_sample_mode(std::string_view name) {
    if (name == "plain") return SampleMode::plain;
    if (name == "unique") return SampleMode::unique;
    throw ParseError("unknown sample mode '" + std::string(name) + "' (expected plain or unique)");
}

SampleTable SampleTable::from_draws(std::vector<double> neglogs, std::uint64_t sampled_count) {
    if (neglogs.empty()) throw MisuseError("sample table needs at least one draw");
    std::sort(neglogs.begin(), neglogs.end());
    std::vector<double> cum(neglogs.size());
    const double n = static_cast<double>(neglogs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < neglogs.size(); ++i) {
        running += std::exp2(neglogs[i]);
        cum[i] = running / n;
    }
    const std::uint64_t n_eff = neglogs.size();
    return from_arrays(std::move(neglogs), std::move(cum), n_eff, sampled_count);
}

SampleTable SampleTable::from_arrays(std::vector<double> neglogs, std::vector<double> cumranks,
                                     std::uint64_t n_effective, std::uint64_t sampled_count) {
    if (neglogs.empty()) throw MisuseError("sample table must not be empty");
    if (neglogs.size() != cumranks.size()) throw MisuseError("neglog and cumrank arrays differ in length");
    if (n_effective == 0) throw MisuseError("n_effective must be positive");
    if (sampled_count < n_effective) throw MisuseError("sampled_count is smaller than n_effective");
    for (std::size_t i = 0; i < neglogs.size(); ++i) {
        if (!std::isfinite(neglogs[i]) || neglogs[i] < 0.0) throw MisuseError("table neglogs must be finite and >= 0");
        if (!std::isfinite(cumranks[i]) || cumranks[i] <= 0.0) throw MisuseError("cumranks must be finite and positive");
        if (i > 0 && neglogs[i] < neglogs[i - 1]) throw MisuseError("table neglogs must be nondecreasing");
        if (i > 0 && cumranks[i] <= cumranks[i - 1]) throw MisuseError("cumranks must be strictly increasing");
    }
    SampleTable t;
    t.neglogs_ = std::move(neglogs);
    t.cumranks_ = std::move(cumranks);
    t.n_effective_ = n_effective;
    t.sampled_count_ = sampled_count;
    t.fingerprint_ = fingerprint_of(t.neglogs_);
    return t;
}

SampleTable build_sample(const PasswordModel& model, std::size_t n, SampleMode mode, Rng& rng,
                         const SampleOptions& options) {
    if (n == 0) throw MisuseError("sample size must be positive");
    const std::uint64_t budget =
        options.max_draws != 0 ? options.max_draws : std::max<std::uint64_t>(1'000'000, 100 * std::uint64_t{n});

    std::vector<double> draws;
    draws.reserve(n);
    std::uint64_t taken = 0;
    std::unordered_set<double> distinct;

    auto need_more = [&]() { return mode == SampleMode::plain ? draws.size() < n : distinct.size() < n; };
    while (need_more()) {
        if (taken == budget) {
            throw BudgetError("draw budget of " + std::to_string(budget) + " exhausted after collecting " +
                              std::to_string(mode == SampleMode::plain ? draws.size() : distinct.size()) + " of " +
                              std::to_string(n) + (mode == SampleMode::plain ? " draws" : " distinct probabilities"));
        }
        ++taken;
        const double neglog = model.sample(rng).neglog;
        if (!std::isfinite(neglog)) continue;
        draws.push_back(neglog);
        if (mode == SampleMode::unique) distinct.insert(neglog);
    }

    auto table = SampleTable::from_draws(std::move(draws), taken);
    return mode == SampleMode::unique ? compress(table) : table;
}

SampleTable compress(const SampleTable& table) {
    const auto neglogs = table.neglogs();
    const auto cum = table.cumranks();
    std::vector<double> out_neglogs;
    std::vector<double> out_cum;
    for (std::size_t i = 0; i < neglogs.size(); ++i) {
        if (i + 1 < neglogs.size() && neglogs[i + 1] == neglogs[i]) continue;
        out_neglogs.push_back(neglogs[i]);
        out_cum.push_back(cum[i]);
    }
    return SampleTable::from_arrays(std::move(out_neglogs), std::move(out_cum), table.n_effective(),
                                    table.sampled_count());
}

std::vector<double> uniform_taus(double width, std::size_t count) {
    if (!(width > 0.0) || !std::isfinite(width)) throw MisuseError("bin width must be positive");
    if (count == 0) throw MisuseError("need at least one bin");
    std::vector<double> taus;
    taus.reserve(count - 1);
    for (std::size_t i = 1; i < count; ++i) taus.push_back(static_cast<double>(i) * width);
    return taus;
}

BinIndex build_bins(const SampleTable& table, std::vector<double> taus) {
    if (table.empty()) throw MisuseError("cannot bin an empty table");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!std::isfinite(taus[i]) || taus[i] <= 0.0) throw MisuseError("bin thresholds must be finite and positive");
        if (i > 0 && taus[i] <= taus[i - 1]) throw MisuseError("bin thresholds must be strictly ascending");
    }
    const auto neglogs = table.neglogs();
    auto count_below = [&](double tau) {
        return static_cast<std::uint32_t>(std::lower_bound(neglogs.begin(), neglogs.end(), tau) - neglogs.begin());
    };

    BinIndex bins;
    bins.bounds_.reserve(taus.size() + 2);
    bins.bounds_.push_back(0);
    for (double tau : taus) bins.bounds_.push_back(count_below(tau));
    bins.bounds_.push_back(static_cast<std::uint32_t>(neglogs.size()));
    if (!taus.empty()) {
        const double width = taus.front();
        bool uniform = true;
        for (std::size_t i = 0; i < taus.size() && uniform; ++i) {
            uniform = taus[i] == static_cast<double>(i + 1) * width;
        }
        if (uniform) {
            bins.uniform_width_ = width;
            bins.inverse_width_ = 1.0 / width;
        }
    }
    bins.taus_ = std::move(taus);
    bins.table_fingerprint_ = table.fingerprint();
    return bins;
}

std::size_t BinIndex::locate(double q) const noexcept {
    const std::size_t last = bin_count() - 1;
    if (last == 0) return 0;
    if (uniform_width_ > 0.0) {
        const double w = uniform_width_;
        const double k = q * inverse_width_;
        std::size_t i = k >= static_cast<double>(last) ? last : k > 0.0 ? static_cast<std::size_t>(k) : 0;
        // correct float rounding at bin edges; taus[i] == (i + 1) * w exactly
        while (i > 0 && q < static_cast<double>(i) * w) --i;
        while (i < last && q >= static_cast<double>(i + 1) * w) ++i;
        return i;
    }
    return static_cast<std::size_t>(std::upper_bound(taus_.begin(), taus_.end(), q) - taus_.begin());
}

namespace {

// std::lower_bound without data-dependent branches: the loop count depends
// only on the range length, so the compare compiles to a conditional move.
const double* branchless_lower_bound(const double* first, std::size_t len, double q) noexcept {
    while (len > 1) {
        const std::size_t half = len / 2;
        first = first[half - 1] < q ? first + half : first;
        len -= half;
    }
    return first + (len == 1 && *first < q ? 1 : 0);
}

}  // namespace

RankEstimate estimate_rank(const SampleTable& table, double q, const EstimateOptions& options) {
    if (std::isnan(q)) throw MisuseError("query neglog is NaN");
    const auto neglogs = table.neglogs();
    const auto cum = table.cumranks();

    RankEstimate out;
    const double* first = neglogs.data();
    const double* last = neglogs.data() + neglogs.size();
    if (options.bins) {
        if (options.bins->table_fingerprint() != table.fingerprint()) {
            throw MisuseError("bin index was built over a different sample table");
        }
        const std::size_t bin = options.bins->locate(q);
        out.bin = static_cast<std::uint32_t>(bin);
        const std::uint32_t* bounds = options.bins->lo().data() + bin;
        first = neglogs.data() + bounds[0];
        last = neglogs.data() + bounds[1];
    }
    const std::size_t j = static_cast<std::size_t>(
        branchless_lower_bound(first, static_cast<std::size_t>(last - first), q) - neglogs.data());
    out.index = j;
    out.rank = j == 0 ? 0.0 : cum[j - 1];

    if (options.interpolate && j >= 1 && j < neglogs.size() && std::isfinite(q)) {
        const double x0 = neglogs[j - 1];
        const double x1 = neglogs[j];
        const double c0 = cum[j - 1];
        const double c1 = cum[j];
        const double frac = (q - x0) / (x1 - x0);
        const double l0 = std::log2(c0);
        const double blended = std::exp2(l0 + frac * (std::log2(c1) - l0));
        out.rank = std::clamp(blended, c0, c1);
        out.interpolated = true;
    }
    return out;
}

// Layout (little endian):
//   magic[8] u32 version u32 reserved u64 n u64 n_effective u64 sampled_count
//   f64 neglogs[n] f64 cumranks[n]
void save_table(const SampleTable& table, std::ostream& out) {
    detail::ByteWriter w(out);
    w.bytes({detail::kTableMagic.data(), detail::kTableMagic.size()});
    w.u32(detail::kFormatVersion);
    w.u32(0);
    w.u64(table.size());
    w.u64(table.n_effective());
    w.u64(table.sampled_count());
    for (double v : table.neglogs()) w.f64(v);
    for (double v : table.cumranks()) w.f64(v);
}

SampleTable load_table(std::istream& in) {
    const auto raw_header = detail::read_exact(in, detail::kTableHeaderSize);
    detail::ByteReader h(raw_header);
    if (h.bytes(detail::kTableMagic.size()) != std::string_view(detail::kTableMagic.data(), detail::kTableMagic.size())) {
        throw FormatError("not a sample table file (bad magic)");
    }
    if (const auto version = h.u32(); version != detail::kFormatVersion) {
        throw FormatError("unsupported table format version " + std::to_string(version));
    }
    h.u32();
    const std::uint64_t n = h.u64();
    const std::uint64_t n_effective = h.u64();
    const std::uint64_t sampled_count = h.u64();
    if (n == 0 || n > (std::uint64_t{1} << 32)) throw FormatError("implausible table size");

    const auto payload = detail::read_exact(in, static_cast<std::size_t>(16 * n));
    detail::ByteReader r(payload);
    std::vector<double> neglogs(n);
    std::vector<double> cum(n);
    for (auto& v : neglogs) v = r.f64();
    for (auto& v : cum) v = r.f64();
    try {
        return SampleTable::from_arrays(std::move(neglogs), std::move(cum), n_effective, sampled_count);
    } catch (const MisuseError& e) {
        throw FormatError(std::string("invalid table contents: ") + e.what());
    }
}

void save_table_file(const SampleTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write table file '" + path + "'");
    save_table(table, out);
    if (!out) throw InputError("error while writing table file '" + path + "'");
}

SampleTable load_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open table file '" + path + "'");
    return load_table(in);
}

void write_table_csv(const SampleTable& table, std::ostream& out) {
    out << "index,neglog,cumrank\n";
    const auto neglogs = table.neglogs();
    const auto cum = table.cumranks();
    for (std::size_t i = 0; i < neglogs.size(); ++i) {
        out << (i + 1) << ',' << format_double(neglogs[i]) << ',' << format_double(cum[i]) << '\n';
    }
}

}  // namespace mcrank
