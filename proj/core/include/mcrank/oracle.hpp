#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcrank/model.hpp"

namespace mcrank {

enum class RankMode {
    group,       // every member of an equal-probability group gets the group's first position
    positional,  // position in the enumeration order (ties broken by byte order)
};

struct RankedEntry {
    std::string password;
    double neglog = 0.0;
    std::uint64_t rank = 0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

// Exact ranks of every password whose neglog is within the threshold.
class RankedList {
public:
    const std::vector<RankedEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    double threshold() const noexcept { return threshold_; }
    RankMode mode() const noexcept { return mode_; }

private:
    friend RankedList build_ranked_list(const PasswordModel&, double, std::size_t, RankMode);
    std::vector<RankedEntry> entries_;
    double threshold_ = 0.0;
    RankMode mode_ = RankMode::group;
};

inline constexpr std::size_t kDefaultEntryBudget = 10'000'000;

// Enumerates the model down to the threshold. Throws BudgetError if more
// than entry_budget passwords qualify, MisuseError for a non-finite threshold.
RankedList build_ranked_list(const PasswordModel& model, double threshold_neglog,
                             std::size_t entry_budget = kDefaultEntryBudget, RankMode mode = RankMode::group);

// Exact rank of the password, or nullopt when it lies beyond the list's
// threshold.
std::optional<std::uint64_t> true_rank(const RankedList& list, std::string_view password, const PasswordModel& model);

// CSV with header "rank,neglog,password"; passwords quoted per RFC 4180.
void write_ranked_csv(const RankedList& list, std::ostream& out);

}  // namespace mcrank
