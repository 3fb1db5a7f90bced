#pragma once

#include <memory>
#include <string>
#include <unordered_map>

#include "mcrank/corpus.hpp"
#include "mcrank/detail/symbol_dist.hpp"
#include "mcrank/model.hpp"

namespace mcrank {

namespace detail {
class ByteReader;
struct ModelHeader;
}  // namespace detail

// Character n-gram Markov model. Every password is padded with order-1
// start markers and terminated by an explicit end symbol, so probabilities
// over all finite strings sum to one. No smoothing: unseen transitions have
// probability zero.
class NGramModel final : public PasswordModel {
public:
    // Degenerate model with no tables (every password has infinite neglog).
    explicit NGramModel(int order = 2, bool weighted = true);
    ~NGramModel() override;
    NGramModel(NGramModel&&) noexcept;
    NGramModel& operator=(NGramModel&&) noexcept;

    int order() const noexcept { return order_; }
    bool weighted() const noexcept { return weighted_; }
    std::size_t history_count() const noexcept;

    ModelKind kind() const noexcept override { return ModelKind::ngram; }
    double neg_log2_prob(std::string_view password) const override;
    ScoredPassword sample(Rng& rng) const override;
    void enumerate(double threshold, const EnumerationSink& sink) const override;
    void save(std::ostream& out) const override;
    std::string describe() const override;

    static std::unique_ptr<NGramModel> read_payload(const detail::ModelHeader& header, detail::ByteReader& payload);

private:
    friend NGramModel train_ngram(const PasswordCorpus&, int, bool);

    const detail::SymbolDist* find(const std::string& history) const;

    int order_;
    bool weighted_;
    std::unordered_map<std::string, detail::SymbolDist> table_;
};

// Throws TrainingError for an empty corpus, order < 2, or passwords holding
// the reserved marker bytes 0xFE/0xFF.
NGramModel train_ngram(const PasswordCorpus& corpus, int order, bool weighted = true);

}  // namespace mcrank
