#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mcrank/model.hpp"

namespace mcrank::detail {

// Buffers completed passwords of equal neglog and forwards each group to the
// sink in byte order once a strictly larger neglog shows up. Completions must
// arrive with nondecreasing neglog.
class OrderedEmitter {
public:
    explicit OrderedEmitter(const EnumerationSink& sink) : sink_(sink) {}

    // Returns false once the sink asked to stop.
    bool add(std::string password, double neglog) {
        if (stopped_) return false;
        if (!group_.empty() && neglog > group_neglog_ && !flush()) return false;
        group_neglog_ = neglog;
        group_.push_back(std::move(password));
        return true;
    }

    bool finish() { return !stopped_ && flush(); }
    bool stopped() const noexcept { return stopped_; }

private:
    bool flush() {
        std::sort(group_.begin(), group_.end());
        for (const auto& pw : group_) {
            if (!sink_(pw, group_neglog_)) {
                stopped_ = true;
                break;
            }
        }
        group_.clear();
        return !stopped_;
    }

    const EnumerationSink& sink_;
    std::vector<std::string> group_;
    double group_neglog_ = 0.0;
    bool stopped_ = false;
};

}  // namespace mcrank::detail
