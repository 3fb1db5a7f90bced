#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mcrank/corpus.hpp"
#include "mcrank/detail/symbol_dist.hpp"
#include "mcrank/model.hpp"

namespace mcrank {

namespace detail {
class ByteReader;
class ByteWriter;
struct ModelHeader;
}  // namespace detail

// Variable-order character Markov model. The next symbol is predicted from
// the longest suffix of the generated prefix (including one start marker)
// whose training count reaches the threshold; the empty context is always
// usable. Counts for every context length are kept, the threshold applies
// at prediction time.
class BackoffModel final : public PasswordModel {
public:
    static constexpr std::uint64_t kDefaultThreshold = 10;

    // max_context = 0 means contexts are unbounded.
    explicit BackoffModel(std::uint64_t count_threshold = kDefaultThreshold, std::size_t max_context = 0,
                          bool weighted = true);

    std::uint64_t count_threshold() const noexcept { return threshold_; }
    std::size_t max_context() const noexcept { return max_context_; }
    bool weighted() const noexcept { return weighted_; }
    std::size_t context_count() const noexcept { return nodes_.size(); }

    ModelKind kind() const noexcept override { return ModelKind::backoff; }
    double neg_log2_prob(std::string_view password) const override;
    ScoredPassword sample(Rng& rng) const override;
    void enumerate(double threshold, const EnumerationSink& sink) const override;
    void save(std::ostream& out) const override;
    std::string describe() const override;

    static std::unique_ptr<BackoffModel> read_payload(const detail::ModelHeader& header, detail::ByteReader& payload);

private:
    friend BackoffModel train_backoff(const PasswordCorpus&, std::uint64_t, bool, std::size_t);

    static constexpr std::uint32_t kNoNode = 0xFFFFFFFF;

    // Node i is the context spelled by the reversed path from the root.
    struct Node {
        detail::SymbolDist dist;
        std::vector<std::pair<unsigned char, std::uint32_t>> children;  // ascending symbol
    };

    std::uint32_t child(std::uint32_t node, unsigned char symbol) const;
    std::uint32_t child_or_create(std::uint32_t node, unsigned char symbol);
    // history starts with the start marker.
    const detail::SymbolDist& predict(std::string_view history) const;
    void write_node(detail::ByteWriter& w, std::uint32_t node) const;
    void read_node(detail::ByteReader& r, std::uint32_t node, std::size_t depth);

    std::uint64_t threshold_;
    std::size_t max_context_;
    bool weighted_;
    std::vector<Node> nodes_;
};

BackoffModel train_backoff(const PasswordCorpus& corpus, std::uint64_t count_threshold = BackoffModel::kDefaultThreshold,
                           bool weighted = true, std::size_t max_context = 0);

}  // namespace mcrank
