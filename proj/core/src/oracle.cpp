#include "mcrank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mcrank/csv.hpp"
#include "mcrank/error.hpp"

namespace mcrank {

RankedList build_ranked_list(const PasswordModel& model, double threshold, std::size_t entry_budget, RankMode mode) {
    if (!std::isfinite(threshold)) throw MisuseError("oracle threshold must be finite");
    RankedList list;
    list.threshold_ = threshold;
    list.mode_ = mode;
    bool over_budget = false;
    model.enumerate(threshold, [&](std::string_view pw, double neglog) {
        if (list.entries_.size() == entry_budget) {
            over_budget = true;
            return false;
        }
        list.entries_.push_back({std::string(pw), neglog, 0});
        return true;
    });
    if (over_budget) {
        throw BudgetError("more than " + std::to_string(entry_budget) + " passwords have neglog <= " +
                          std::to_string(threshold) + "; lower the threshold or raise the entry budget");
    }
    auto& e = list.entries_;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (mode == RankMode::positional || i == 0 || e[i].neglog != e[i - 1].neglog) {
            e[i].rank = i;
        } else {
            e[i].rank = e[i - 1].rank;
        }
    }
    return list;
}

std::optional<std::uint64_t> true_rank(const RankedList& list, std::string_view password, const PasswordModel& model) {
    const double neglog = model.neg_log2_prob(password);
    if (!(neglog <= list.threshold())) return std::nullopt;
    const auto& e = list.entries();
    auto first = std::lower_bound(e.begin(), e.end(), neglog,
                                  [](const RankedEntry& r, double v) { return r.neglog < v; });
    if (list.mode() == RankMode::group) return static_cast<std::uint64_t>(first - e.begin());
    for (auto it = first; it != e.end() && it->neglog == neglog; ++it) {
        if (it->password == password) return it->rank;
    }
    return std::nullopt;
}

void write_ranked_csv(const RankedList& list, std::ostream& out) {
    out << "rank,neglog,password\n";
    for (const auto& e : list.entries()) {
        out << e.rank << ',' << format_double(e.neglog) << ',' << csv_field(e.password) << '\n';
    }
}

}  // namespace mcrank
