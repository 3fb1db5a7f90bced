#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mcrank/model.hpp"

namespace mcrank::detail {

// Next-symbol distribution of one context, maximum-likelihood from counts.
struct SymbolDist {
    struct Entry {
        unsigned char symbol;
        std::uint64_t count;
        double neglog;
        std::uint64_t cumulative;  // inclusive prefix sum of counts
    };

    std::uint64_t total = 0;
    std::vector<Entry> entries;  // ascending symbol

    void add(unsigned char symbol, std::uint64_t weight) {
        auto it = std::lower_bound(entries.begin(), entries.end(), symbol,
                                   [](const Entry& e, unsigned char s) { return e.symbol < s; });
        if (it == entries.end() || it->symbol != symbol) {
            it = entries.insert(it, Entry{symbol, 0, 0.0, 0});
        }
        it->count += weight;
        total += weight;
    }

    void finalize() {
        std::uint64_t running = 0;
        const double t = static_cast<double>(total);
        for (auto& e : entries) {
            running += e.count;
            e.cumulative = running;
            e.neglog = std::log2(t / static_cast<double>(e.count));
        }
        entries.shrink_to_fit();
    }

    const Entry* find(unsigned char symbol) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), symbol,
                                   [](const Entry& e, unsigned char s) { return e.symbol < s; });
        return (it != entries.end() && it->symbol == symbol) ? &*it : nullptr;
    }

    const Entry& draw(Rng& rng) const {
        std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
        const std::uint64_t r = pick(rng);
        auto it = std::upper_bound(entries.begin(), entries.end(), r,
                                   [](std::uint64_t v, const Entry& e) { return v < e.cumulative; });
        return *it;
    }
};

}  // namespace mcrank::detail
