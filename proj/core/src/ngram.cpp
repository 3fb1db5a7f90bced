#include "mcrank/ngram.hpp"

#include <algorithm>
#include <ostream>
#include <queue>
#include <sstream>

#include "best_first.hpp"
#include "binary_io.hpp"
#include "mcrank/error.hpp"
#include "mcrank/detail/symbol_dist.hpp"

namespace mcrank {

namespace {

bool has_reserved_bytes(std::string_view pw) {
    return std::any_of(pw.begin(), pw.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u == kStartSymbol || u == kEndSymbol;
    });
}

void shift_in(std::string& history, unsigned char symbol) {
    if (history.empty()) return;
    history.erase(history.begin());
    history.push_back(static_cast<char>(symbol));
}

}  // namespace

NGramModel::NGramModel(int order, bool weighted) : order_(order), weighted_(weighted) {}
NGramModel::~NGramModel() = default;
NGramModel::NGramModel(NGramModel&&) noexcept = default;
NGramModel& NGramModel::operator=(NGramModel&&) noexcept = default;

std::size_t NGramModel::history_count() const noexcept { return table_.size(); }

NGramModel train_ngram(const PasswordCorpus& corpus, int order, bool weighted) {
    if (order < 2) throw TrainingError("n-gram order must be at least 2");
    if (order > 255) throw TrainingError("n-gram order must be at most 255");
    if (corpus.empty()) throw TrainingError("cannot train on an empty corpus");

    NGramModel model(order, weighted);
    const std::string start(static_cast<std::size_t>(order - 1), static_cast<char>(kStartSymbol));
    for (const auto& entry : corpus.entries()) {
        if (has_reserved_bytes(entry.password)) {
            throw TrainingError("password contains reserved byte 0xFE/0xFF");
        }
        const std::uint64_t w = weighted ? entry.count : 1;
        std::string history = start;
        for (char c : entry.password) {
            model.table_[history].add(static_cast<unsigned char>(c), w);
            shift_in(history, static_cast<unsigned char>(c));
        }
        model.table_[history].add(kEndSymbol, w);
    }
    for (auto& [_, dist] : model.table_) dist.finalize();
    return model;
}

const detail::SymbolDist* NGramModel::find(const std::string& history) const {
    auto it = table_.find(history);
    return it == table_.end() ? nullptr : &it->second;
}

double NGramModel::neg_log2_prob(std::string_view password) const {
    if (has_reserved_bytes(password)) return kInfiniteNeglog;
    std::string history(static_cast<std::size_t>(order_ - 1), static_cast<char>(kStartSymbol));
    double acc = 0.0;
    auto step = [&](unsigned char symbol) {
        const auto* dist = find(history);
        if (!dist) return false;
        const auto* e = dist->find(symbol);
        if (!e) return false;
        acc += e->neglog;
        shift_in(history, symbol);
        return true;
    };
    for (char c : password) {
        if (!step(static_cast<unsigned char>(c))) return kInfiniteNeglog;
    }
    if (!step(kEndSymbol)) return kInfiniteNeglog;
    return acc;
}

ScoredPassword NGramModel::sample(Rng& rng) const {
    if (table_.empty()) throw MisuseError("cannot sample from an untrained model");
    ScoredPassword out;
    std::string history(static_cast<std::size_t>(order_ - 1), static_cast<char>(kStartSymbol));
    for (;;) {
        const auto* dist = find(history);
        // Every reachable history was seen in training with a successor.
        const auto& e = dist->draw(rng);
        out.neglog += e.neglog;
        if (e.symbol == kEndSymbol) break;
        out.password.push_back(static_cast<char>(e.symbol));
        shift_in(history, e.symbol);
    }
    return out;
}

void NGramModel::enumerate(double threshold, const EnumerationSink& sink) const {
    struct State {
        double cost;
        std::string prefix;
        bool complete;
    };
    auto worse = [](const State& a, const State& b) { return a.cost > b.cost; };
    std::priority_queue<State, std::vector<State>, decltype(worse)> queue(worse);
    detail::OrderedEmitter emitter(sink);

    const std::string start(static_cast<std::size_t>(order_ - 1), static_cast<char>(kStartSymbol));
    if (!table_.empty() && threshold >= 0.0) queue.push({0.0, {}, false});

    std::string history;
    while (!queue.empty()) {
        State s = queue.top();
        queue.pop();
        if (s.complete) {
            if (!emitter.add(std::move(s.prefix), s.cost)) return;
            continue;
        }
        history = start + s.prefix;
        history.erase(0, history.size() - start.size());
        const auto* dist = find(history);
        if (!dist) continue;
        for (const auto& e : dist->entries) {
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

std::string NGramModel::describe() const {
    return std::to_string(order_) + "-gram" + (weighted_ ? "" : " (unweighted)");
}

// Payload: sequence of records, sorted by history bytes:
//   history[order-1] u16 n_next { u8 symbol, u64 count }*n_next
void NGramModel::save(std::ostream& out) const {
    std::vector<const std::pair<const std::string, detail::SymbolDist>*> rows;
    rows.reserve(table_.size());
    std::uint64_t payload = 0;
    for (const auto& row : table_) {
        rows.push_back(&row);
        payload += row.first.size() + 2 + 9 * row.second.entries.size();
    }
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });

    detail::ByteWriter w(out);
    detail::write_model_header(w, {static_cast<std::uint8_t>(ModelKind::ngram),
                                   static_cast<std::uint8_t>(weighted_ ? 1 : 0),
                                   static_cast<std::uint64_t>(order_), 0, payload});
    for (const auto* row : rows) {
        w.bytes(row->first);
        w.u16(static_cast<std::uint16_t>(row->second.entries.size()));
        for (const auto& e : row->second.entries) {
            w.u8(e.symbol);
            w.u64(e.count);
        }
    }
}

std::unique_ptr<NGramModel> NGramModel::read_payload(const detail::ModelHeader& header, detail::ByteReader& r) {
    if (header.param_a < 2 || header.param_a > 255) throw FormatError("bad n-gram order");
    auto model = std::make_unique<NGramModel>(static_cast<int>(header.param_a), (header.flags & 1) != 0);
    const std::size_t hlen = header.param_a - 1;
    while (!r.done()) {
        std::string history = r.bytes(hlen);
        const std::uint16_t n = r.u16();
        if (n == 0) throw FormatError("empty n-gram context");
        auto& dist = model->table_[history];
        if (!dist.entries.empty()) throw FormatError("duplicate n-gram context");
        for (std::uint16_t i = 0; i < n; ++i) {
            const std::uint8_t symbol = r.u8();
            const std::uint64_t count = r.u64();
            if (count == 0) throw FormatError("zero transition count");
            if (!dist.entries.empty() && dist.entries.back().symbol >= symbol) {
                throw FormatError("unsorted n-gram symbols");
            }
            dist.entries.push_back({symbol, count, 0.0, 0});
            dist.total += count;
        }
        dist.finalize();
    }
    return model;
}

}  // namespace mcrank
