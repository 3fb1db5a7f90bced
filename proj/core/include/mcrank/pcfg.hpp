#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcrank/corpus.hpp"
#include "mcrank/model.hpp"

namespace mcrank {

namespace detail {
class ByteReader;
struct ModelHeader;
}  // namespace detail

enum class CharClass : std::uint8_t {
    letter = 'L',  // ASCII letters
    digit = 'D',   // ASCII digits
    symbol = 'S',  // every other byte
};

CharClass classify(unsigned char c) noexcept;

struct Segment {
    CharClass cls;
    std::uint32_t length;  // bytes

    friend auto operator<=>(const Segment&, const Segment&) = default;
};

// Maximal runs of one character class, e.g. "abc12!" -> L3 D2 S1.
std::vector<Segment> segment_structure(std::string_view password);
std::string structure_key(const std::vector<Segment>& segments);

// Probabilistic context-free grammar: a base structure (sequence of class
// runs) followed by one terminal string per run. Letter, digit and symbol
// terminals all come from the training runs of matching class and length.
// p(password) = p(structure) * prod p(terminal_i); anything unseen is
// probability zero.
class PcfgModel final : public PasswordModel {
public:
    explicit PcfgModel(bool weighted = true) : weighted_(weighted) {}

    bool weighted() const noexcept { return weighted_; }
    std::size_t structure_count() const noexcept { return structures_.size(); }
    std::size_t terminal_count() const noexcept;

    ModelKind kind() const noexcept override { return ModelKind::pcfg; }
    double neg_log2_prob(std::string_view password) const override;
    ScoredPassword sample(Rng& rng) const override;
    void enumerate(double threshold, const EnumerationSink& sink) const override;
    void save(std::ostream& out) const override;
    std::string describe() const override;

    static std::unique_ptr<PcfgModel> read_payload(const detail::ModelHeader& header, detail::ByteReader& payload);

private:
    friend PcfgModel train_pcfg(const PasswordCorpus&, bool);

    struct Terminal {
        std::string text;
        std::uint64_t count = 0;
        double neglog = 0.0;
        std::uint64_t cumulative = 0;
    };
    struct TerminalGroup {
        Segment segment{};
        std::uint64_t total = 0;
        std::vector<Terminal> terminals;     // ascending text
        std::vector<std::uint32_t> by_cost;  // ascending (neglog, text)
        double min_neglog = 0.0;
    };
    struct Structure {
        std::string key;
        std::vector<std::uint32_t> groups;  // one group per segment
        std::uint64_t count = 0;
        double neglog = 0.0;
        std::uint64_t cumulative = 0;
        std::vector<double> remaining_bound;  // admissible lower bound on the cost of segments k..end
    };

    void finalize();
    std::uint32_t group_id(const Segment& seg);

    bool weighted_;
    std::uint64_t structure_total_ = 0;
    std::vector<Structure> structures_;  // ascending key
    std::unordered_map<std::string, std::uint32_t> structure_index_;
    std::vector<TerminalGroup> groups_;  // ascending segment
    std::map<Segment, std::uint32_t> group_index_;
};

PcfgModel train_pcfg(const PasswordCorpus& corpus, bool weighted = true);

}  // namespace mcrank
