#include "mcrank/pcfg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>

#include "best_first.hpp"
#include "binary_io.hpp"
#include "mcrank/error.hpp"

namespace mcrank {

CharClass classify(unsigned char c) noexcept {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return CharClass::letter;
    if (c >= '0' && c <= '9') return CharClass::digit;
    return CharClass::symbol;
}

std::vector<Segment> segment_structure(std::string_view password) {
    std::vector<Segment> out;
    for (char c : password) {
        const CharClass cls = classify(static_cast<unsigned char>(c));
        if (!out.empty() && out.back().cls == cls) {
            ++out.back().length;
        } else {
            out.push_back({cls, 1});
        }
    }
    return out;
}

namespace {

// Adjacent runs must differ in class and every run is nonempty.
bool segment_structure_valid(const std::vector<Segment>& segs) {
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].length == 0) return false;
        if (i > 0 && segs[i - 1].cls == segs[i].cls) return false;
    }
    return true;
}

}  // namespace

std::string structure_key(const std::vector<Segment>& segments) {
    std::string key;
    for (const auto& s : segments) {
        key.push_back(static_cast<char>(s.cls));
        key += std::to_string(s.length);
    }
    return key;
}

std::size_t PcfgModel::terminal_count() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups_) n += g.terminals.size();
    return n;
}

std::uint32_t PcfgModel::group_id(const Segment& seg) {
    auto [it, inserted] = group_index_.try_emplace(seg, static_cast<std::uint32_t>(groups_.size()));
    if (inserted) {
        groups_.emplace_back();
        groups_.back().segment = seg;
    }
    return it->second;
}

PcfgModel train_pcfg(const PasswordCorpus& corpus, bool weighted) {
    if (corpus.empty()) throw TrainingError("cannot train on an empty corpus");

    std::map<std::string, std::pair<std::vector<Segment>, std::uint64_t>> structures;
    std::map<Segment, std::map<std::string, std::uint64_t>> terminals;
    for (const auto& entry : corpus.entries()) {
        const std::uint64_t w = weighted ? entry.count : 1;
        auto segs = segment_structure(entry.password);
        std::size_t pos = 0;
        for (const auto& s : segs) {
            terminals[s][entry.password.substr(pos, s.length)] += w;
            pos += s.length;
        }
        auto key = structure_key(segs);
        auto& slot = structures[key];
        slot.first = std::move(segs);
        slot.second += w;
    }

    PcfgModel model(weighted);
    for (auto& [seg, terms] : terminals) {
        auto& g = model.groups_[model.group_id(seg)];
        g.terminals.reserve(terms.size());
        for (auto& [text, count] : terms) g.terminals.push_back({text, count, 0.0, 0});
    }
    for (auto& [key, slot] : structures) {
        PcfgModel::Structure s;
        s.key = key;
        s.count = slot.second;
        for (const auto& seg : slot.first) s.groups.push_back(model.group_index_.at(seg));
        model.structures_.push_back(std::move(s));
    }
    model.finalize();
    return model;
}

void PcfgModel::finalize() {
    for (auto& g : groups_) {
        g.total = 0;
        for (const auto& t : g.terminals) g.total += t.count;
        std::uint64_t running = 0;
        const double total = static_cast<double>(g.total);
        for (auto& t : g.terminals) {
            running += t.count;
            t.cumulative = running;
            t.neglog = std::log2(total / static_cast<double>(t.count));
        }
        g.by_cost.resize(g.terminals.size());
        for (std::uint32_t i = 0; i < g.by_cost.size(); ++i) g.by_cost[i] = i;
        std::sort(g.by_cost.begin(), g.by_cost.end(), [&g](std::uint32_t a, std::uint32_t b) {
            const auto& ta = g.terminals[a];
            const auto& tb = g.terminals[b];
            return ta.neglog != tb.neglog ? ta.neglog < tb.neglog : ta.text < tb.text;
        });
        g.min_neglog = g.terminals.empty() ? 0.0 : g.terminals[g.by_cost.front()].neglog;
    }

    structure_total_ = 0;
    for (const auto& s : structures_) structure_total_ += s.count;
    std::uint64_t running = 0;
    structure_index_.clear();
    for (std::uint32_t i = 0; i < structures_.size(); ++i) {
        auto& s = structures_[i];
        running += s.count;
        s.cumulative = running;
        s.neglog = std::log2(static_cast<double>(structure_total_) / static_cast<double>(s.count));
        // Slightly shrunk so the bound stays below every achievable float sum.
        s.remaining_bound.assign(s.groups.size() + 1, 0.0);
        double exact = 0.0;
        for (std::size_t k = s.groups.size(); k-- > 0;) {
            exact += groups_[s.groups[k]].min_neglog;
            s.remaining_bound[k] = std::max(0.0, exact * (1.0 - 1e-9) - 1e-9);
        }
        structure_index_.emplace(s.key, i);
    }
}

double PcfgModel::neg_log2_prob(std::string_view password) const {
    const auto segs = segment_structure(password);
    auto it = structure_index_.find(structure_key(segs));
    if (it == structure_index_.end()) return kInfiniteNeglog;
    const auto& s = structures_[it->second];
    double acc = s.neglog;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& g = groups_[s.groups[k]];
        const std::string_view text = password.substr(pos, segs[k].length);
        pos += segs[k].length;
        auto t = std::lower_bound(g.terminals.begin(), g.terminals.end(), text,
                                  [](const Terminal& term, std::string_view v) { return term.text < v; });
        if (t == g.terminals.end() || t->text != text) return kInfiniteNeglog;
        acc += t->neglog;
    }
    return acc;
}

ScoredPassword PcfgModel::sample(Rng& rng) const {
    if (structures_.empty()) throw MisuseError("cannot sample from an untrained model");
    std::uniform_int_distribution<std::uint64_t> pick_structure(0, structure_total_ - 1);
    const std::uint64_t r = pick_structure(rng);
    const auto& s = *std::upper_bound(structures_.begin(), structures_.end(), r,
                                      [](std::uint64_t v, const Structure& st) { return v < st.cumulative; });
    ScoredPassword out;
    out.neglog = s.neglog;
    for (std::uint32_t gid : s.groups) {
        const auto& g = groups_[gid];
        std::uniform_int_distribution<std::uint64_t> pick(0, g.total - 1);
        const std::uint64_t rt = pick(rng);
        const auto& t = *std::upper_bound(g.terminals.begin(), g.terminals.end(), rt,
                                          [](std::uint64_t v, const Terminal& term) { return v < term.cumulative; });
        out.password += t.text;
        out.neglog += t.neglog;
    }
    return out;
}

void PcfgModel::enumerate(double threshold, const EnumerationSink& sink) const {
    struct State {
        double priority;  // cost plus admissible bound on the remaining segments
        double cost;
        std::uint32_t structure;
        std::uint32_t next_segment;
        std::string prefix;
    };
    auto worse = [](const State& a, const State& b) { return a.priority > b.priority; };
    std::priority_queue<State, std::vector<State>, decltype(worse)> queue(worse);
    detail::OrderedEmitter emitter(sink);

    for (std::uint32_t i = 0; i < structures_.size(); ++i) {
        const auto& s = structures_[i];
        const double priority = s.neglog + s.remaining_bound[0];
        if (priority <= threshold && s.neglog <= threshold) queue.push({priority, s.neglog, i, 0, {}});
    }

    while (!queue.empty()) {
        State st = queue.top();
        queue.pop();
        const auto& s = structures_[st.structure];
        if (st.next_segment == s.groups.size()) {
            if (!emitter.add(std::move(st.prefix), st.cost)) return;
            continue;
        }
        const auto& g = groups_[s.groups[st.next_segment]];
        const double bound = s.remaining_bound[st.next_segment + 1];
        const bool last = st.next_segment + 1 == s.groups.size();
        for (std::uint32_t idx : g.by_cost) {
            const auto& t = g.terminals[idx];
            const double cost = st.cost + t.neglog;
            const double priority = last ? cost : cost + bound;
            if (priority > threshold) break;
            if (cost > threshold) break;
            queue.push({priority, cost, st.structure, st.next_segment + 1, st.prefix + t.text});
        }
    }
    emitter.finish();
}

std::string PcfgModel::describe() const { return weighted_ ? "pcfg" : "pcfg (unweighted)"; }

// Payload (empty for an untrained model):
//   u32 n_groups { u8 class, u32 length, u32 n_terminals { bytes[length], u64 count }* }*
//   u32 n_structures { u32 n_segments { u8 class, u32 length }*, u64 count }*
void PcfgModel::save(std::ostream& out) const {
    std::uint64_t payload = 0;
    if (!groups_.empty() || !structures_.empty()) {
        payload += 8;
        for (const auto& g : groups_) payload += 9 + g.terminals.size() * (g.segment.length + 8);
        for (const auto& s : structures_) payload += 12 + 5 * s.groups.size();
    }
    detail::ByteWriter w(out);
    detail::write_model_header(w, {static_cast<std::uint8_t>(ModelKind::pcfg),
                                   static_cast<std::uint8_t>(weighted_ ? 1 : 0), 0, 0, payload});
    if (payload == 0) return;
    w.u32(static_cast<std::uint32_t>(groups_.size()));
    for (const auto& g : groups_) {
        w.u8(static_cast<std::uint8_t>(g.segment.cls));
        w.u32(g.segment.length);
        w.u32(static_cast<std::uint32_t>(g.terminals.size()));
        for (const auto& t : g.terminals) {
            w.bytes(t.text);
            w.u64(t.count);
        }
    }
    w.u32(static_cast<std::uint32_t>(structures_.size()));
    for (const auto& s : structures_) {
        w.u32(static_cast<std::uint32_t>(s.groups.size()));
        for (std::uint32_t gid : s.groups) {
            w.u8(static_cast<std::uint8_t>(groups_[gid].segment.cls));
            w.u32(groups_[gid].segment.length);
        }
        w.u64(s.count);
    }
}

std::unique_ptr<PcfgModel> PcfgModel::read_payload(const detail::ModelHeader& header, detail::ByteReader& r) {
    auto model = std::make_unique<PcfgModel>((header.flags & 1) != 0);
    if (r.done()) return model;

    auto read_class = [&r]() {
        const std::uint8_t c = r.u8();
        if (c != 'L' && c != 'D' && c != 'S') throw FormatError("bad character class tag");
        return static_cast<CharClass>(c);
    };

    const std::uint32_t n_groups = r.u32();
    for (std::uint32_t i = 0; i < n_groups; ++i) {
        Segment seg{read_class(), r.u32()};
        if (seg.length == 0) throw FormatError("zero-length terminal group");
        if (!model->groups_.empty() && !(model->groups_.back().segment < seg)) {
            throw FormatError("unsorted terminal groups");
        }
        auto& g = model->groups_[model->group_id(seg)];
        const std::uint32_t n_terms = r.u32();
        if (static_cast<std::uint64_t>(n_terms) * (seg.length + 8) > r.remaining()) {
            throw FormatError("unexpected end of data");
        }
        g.terminals.reserve(n_terms);
        for (std::uint32_t k = 0; k < n_terms; ++k) {
            std::string text = r.bytes(seg.length);
            const std::uint64_t count = r.u64();
            if (count == 0) throw FormatError("zero terminal count");
            if (!g.terminals.empty() && g.terminals.back().text >= text) throw FormatError("unsorted terminals");
            g.terminals.push_back({std::move(text), count, 0.0, 0});
        }
    }
    const std::uint32_t n_structures = r.u32();
    for (std::uint32_t i = 0; i < n_structures; ++i) {
        const std::uint32_t n_segments = r.u32();
        if (static_cast<std::uint64_t>(n_segments) * 5 > r.remaining()) throw FormatError("unexpected end of data");
        std::vector<Segment> segs;
        segs.reserve(n_segments);
        for (std::uint32_t k = 0; k < n_segments; ++k) segs.push_back({read_class(), r.u32()});
        if (segment_structure_valid(segs) == false) throw FormatError("malformed base structure");
        Structure st;
        st.key = structure_key(segs);
        st.count = r.u64();
        if (st.count == 0) throw FormatError("zero structure count");
        if (!model->structures_.empty() && model->structures_.back().key >= st.key) {
            throw FormatError("unsorted structures");
        }
        for (const auto& seg : segs) {
            auto it = model->group_index_.find(seg);
            if (it == model->group_index_.end() || model->groups_[it->second].terminals.empty()) {
                throw FormatError("structure references missing terminal group");
            }
            st.groups.push_back(it->second);
        }
        model->structures_.push_back(std::move(st));
    }
    if (!r.done()) throw FormatError("trailing bytes after grammar");
    model->finalize();
    return model;
}

}  // namespace mcrank
