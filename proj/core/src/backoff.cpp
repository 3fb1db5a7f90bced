#include "mcrank/backoff.hpp"

#include <algorithm>
#include <ostream>
#include <queue>

#include "best_first.hpp"
#include "binary_io.hpp"
#include "mcrank/error.hpp"

namespace mcrank {

namespace {

bool has_reserved_bytes(std::string_view pw) {
    return std::any_of(pw.begin(), pw.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u == kStartSymbol || u == kEndSymbol;
    });
}

constexpr std::size_t kMaxSerializedDepth = 4096;

}  // namespace

BackoffModel::BackoffModel(std::uint64_t count_threshold, std::size_t max_context, bool weighted)
    : threshold_(count_threshold), max_context_(max_context), weighted_(weighted) {
    if (threshold_ == 0) throw TrainingError("backoff count threshold must be positive");
}

std::uint32_t BackoffModel::child(std::uint32_t node, unsigned char symbol) const {
    const auto& kids = nodes_[node].children;
    auto it = std::lower_bound(kids.begin(), kids.end(), symbol,
                               [](const auto& kv, unsigned char s) { return kv.first < s; });
    return (it != kids.end() && it->first == symbol) ? it->second : kNoNode;
}

std::uint32_t BackoffModel::child_or_create(std::uint32_t node, unsigned char symbol) {
    auto& kids = nodes_[node].children;
    auto it = std::lower_bound(kids.begin(), kids.end(), symbol,
                               [](const auto& kv, unsigned char s) { return kv.first < s; });
    if (it != kids.end() && it->first == symbol) return it->second;
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    kids.insert(it, {symbol, id});
    nodes_.emplace_back();
    return id;
}

BackoffModel train_backoff(const PasswordCorpus& corpus, std::uint64_t count_threshold, bool weighted,
                           std::size_t max_context) {
    if (corpus.empty()) throw TrainingError("cannot train on an empty corpus");
    BackoffModel model(count_threshold, max_context, weighted);
    model.nodes_.emplace_back();

    std::string seq;
    for (const auto& entry : corpus.entries()) {
        if (has_reserved_bytes(entry.password)) {
            throw TrainingError("password contains reserved byte 0xFE/0xFF");
        }
        const std::uint64_t w = weighted ? entry.count : 1;
        seq.assign(1, static_cast<char>(kStartSymbol));
        seq += entry.password;
        const std::size_t len = entry.password.size();
        for (std::size_t i = 0; i <= len; ++i) {
            const unsigned char symbol = i < len ? static_cast<unsigned char>(entry.password[i]) : kEndSymbol;
            // history is seq[0, i + 1)
            std::size_t depth = i + 1;
            if (max_context != 0) depth = std::min(depth, max_context);
            std::uint32_t node = 0;
            model.nodes_[node].dist.add(symbol, w);
            for (std::size_t k = 1; k <= depth; ++k) {
                node = model.child_or_create(node, static_cast<unsigned char>(seq[i + 1 - k]));
                model.nodes_[node].dist.add(symbol, w);
            }
        }
    }
    for (auto& n : model.nodes_) {
        n.dist.finalize();
        n.children.shrink_to_fit();
    }
    return model;
}

const detail::SymbolDist& BackoffModel::predict(std::string_view history) const {
    std::uint32_t node = 0;
    std::size_t depth = history.size();
    if (max_context_ != 0) depth = std::min(depth, max_context_);
    for (std::size_t k = 1; k <= depth; ++k) {
        const std::uint32_t next = child(node, static_cast<unsigned char>(history[history.size() - k]));
        if (next == kNoNode || nodes_[next].dist.total < threshold_) break;
        node = next;
    }
    return nodes_[node].dist;
}

double BackoffModel::neg_log2_prob(std::string_view password) const {
    if (nodes_.empty() || has_reserved_bytes(password)) return kInfiniteNeglog;
    std::string history(1, static_cast<char>(kStartSymbol));
    history.reserve(password.size() + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i <= password.size(); ++i) {
        const unsigned char symbol = i < password.size() ? static_cast<unsigned char>(password[i]) : kEndSymbol;
        const auto* e = predict(history).find(symbol);
        if (!e) return kInfiniteNeglog;
        acc += e->neglog;
        history.push_back(static_cast<char>(symbol));
    }
    return acc;
}

ScoredPassword BackoffModel::sample(Rng& rng) const {
    if (nodes_.empty()) throw MisuseError("cannot sample from an untrained model");
    ScoredPassword out;
    std::string history(1, static_cast<char>(kStartSymbol));
    for (;;) {
        const auto& e = predict(history).draw(rng);
        out.neglog += e.neglog;
        if (e.symbol == kEndSymbol) break;
        out.password.push_back(static_cast<char>(e.symbol));
        history.push_back(static_cast<char>(e.symbol));
    }
    return out;
}

void BackoffModel::enumerate(double threshold, const EnumerationSink& sink) const {
    struct State {
        double cost;
        std::string prefix;
        bool complete;
    };
    auto worse = [](const State& a, const State& b) { return a.cost > b.cost; };
    std::priority_queue<State, std::vector<State>, decltype(worse)> queue(worse);
    detail::OrderedEmitter emitter(sink);
    if (!nodes_.empty() && threshold >= 0.0) queue.push({0.0, {}, false});

    std::string history;
    while (!queue.empty()) {
        State s = queue.top();
        queue.pop();
        if (s.complete) {
            if (!emitter.add(std::move(s.prefix), s.cost)) return;
            continue;
        }
        history.assign(1, static_cast<char>(kStartSymbol));
        history += s.prefix;
        for (const auto& e : predict(history).entries) {
            const double cost = s.cost + e.neglog;
            if (cost > threshold) continue;
            if (e.symbol == kEndSymbol) {
                queue.push({cost, s.prefix, true});
            } else {
                queue.push({cost, s.prefix + static_cast<char>(e.symbol), false});
            }
        }
    }
    emitter.finish();
}

std::string BackoffModel::describe() const {
    std::string s = "backoff(threshold=" + std::to_string(threshold_);
    if (max_context_ != 0) s += ", max_context=" + std::to_string(max_context_);
    s += ")";
    if (!weighted_) s += " (unweighted)";
    return s;
}

// Payload: the context trie in preorder. Each node is
//   u16 n_next { u8 symbol, u64 count }*n_next u16 n_children { u8 symbol, node }*n_children
void BackoffModel::write_node(detail::ByteWriter& w, std::uint32_t node) const {
    const auto& n = nodes_[node];
    w.u16(static_cast<std::uint16_t>(n.dist.entries.size()));
    for (const auto& e : n.dist.entries) {
        w.u8(e.symbol);
        w.u64(e.count);
    }
    w.u16(static_cast<std::uint16_t>(n.children.size()));
    for (const auto& [symbol, id] : n.children) {
        w.u8(symbol);
        write_node(w, id);
    }
}

void BackoffModel::save(std::ostream& out) const {
    std::uint64_t payload = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        payload += 4 + 9 * nodes_[i].dist.entries.size() + (i == 0 ? 0 : 1);
    }
    detail::ByteWriter w(out);
    detail::write_model_header(w, {static_cast<std::uint8_t>(ModelKind::backoff),
                                   static_cast<std::uint8_t>(weighted_ ? 1 : 0), threshold_,
                                   static_cast<std::uint64_t>(max_context_), payload});
    if (!nodes_.empty()) write_node(w, 0);
}

void BackoffModel::read_node(detail::ByteReader& r, std::uint32_t node, std::size_t depth) {
    if (depth > kMaxSerializedDepth) throw FormatError("backoff trie too deep");
    const std::uint16_t n_next = r.u16();
    {
        auto& dist = nodes_[node].dist;
        for (std::uint16_t i = 0; i < n_next; ++i) {
            const std::uint8_t symbol = r.u8();
            const std::uint64_t count = r.u64();
            if (count == 0) throw FormatError("zero transition count");
            if (!dist.entries.empty() && dist.entries.back().symbol >= symbol) {
                throw FormatError("unsorted backoff symbols");
            }
            dist.entries.push_back({symbol, count, 0.0, 0});
            dist.total += count;
        }
        dist.finalize();
        if (dist.total == 0) throw FormatError("empty backoff context");
    }
    const std::uint16_t n_children = r.u16();
    for (std::uint16_t i = 0; i < n_children; ++i) {
        const std::uint8_t symbol = r.u8();
        auto& kids = nodes_[node].children;
        if (!kids.empty() && kids.back().first >= symbol) throw FormatError("unsorted backoff children");
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        kids.push_back({symbol, id});
        nodes_.emplace_back();
        read_node(r, id, depth + 1);
    }
}

std::unique_ptr<BackoffModel> BackoffModel::read_payload(const detail::ModelHeader& header, detail::ByteReader& r) {
    if (header.param_a == 0) throw FormatError("backoff threshold must be positive");
    auto model = std::make_unique<BackoffModel>(header.param_a, static_cast<std::size_t>(header.param_b),
                                                (header.flags & 1) != 0);
    if (!r.done()) {
        model->nodes_.emplace_back();
        model->read_node(r, 0, 0);
    }
    return model;
}

}  // namespace mcrank
