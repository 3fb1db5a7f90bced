#include "mcrank/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "mcrank/error.hpp"

namespace mcrank {

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "plain") return CorpusFormat::plain;
    if (name == "counted") return CorpusFormat::counted;
    if (name == "ranked") return CorpusFormat::ranked;
    throw ParseError("unknown corpus format '" + std::string(name) +
                     "' (expected plain, counted or ranked)");
}

bool is_valid_utf8(std::string_view bytes) noexcept {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(bytes[i]);
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // overlong encodings, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
            return false;
        }
        i += len;
    }
    return true;
}

PasswordCorpus PasswordCorpus::from_counts(std::vector<CorpusEntry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.password < b.password; });
    PasswordCorpus corpus;
    for (auto& e : entries) {
        if (e.count == 0) continue;
        if (!corpus.entries_.empty() && corpus.entries_.back().password == e.password) {
            corpus.entries_.back().count += e.count;
        } else {
            corpus.entries_.push_back(std::move(e));
        }
    }
    std::stable_sort(corpus.entries_.begin(), corpus.entries_.end(),
                     [](const CorpusEntry& a, const CorpusEntry& b) { return a.count > b.count; });
    for (const auto& e : corpus.entries_) corpus.total_count_ += e.count;
    return corpus;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

}  // namespace

PasswordCorpus load_corpus(std::istream& source, CorpusFormat format) {
    std::vector<CorpusEntry> entries;
    std::unordered_map<std::string, std::size_t> plain_index;
    std::vector<std::string> ranked;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!is_valid_utf8(line)) throw ParseError("invalid UTF-8", line_no);

        switch (format) {
            case CorpusFormat::plain: {
                auto [it, inserted] = plain_index.try_emplace(line, entries.size());
                if (inserted) {
                    entries.push_back({line, 1});
                } else {
                    ++entries[it->second].count;
                }
                break;
            }
            case CorpusFormat::counted: {
                std::size_t pos = 0;
                while (pos < line.size() && is_space(line[pos])) ++pos;
                const std::size_t digits_begin = pos;
                while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') ++pos;
                if (pos == digits_begin) throw ParseError("expected leading count", line_no);
                std::uint64_t count = 0;
                auto res = std::from_chars(line.data() + digits_begin, line.data() + pos, count);
                if (res.ec != std::errc{}) throw ParseError("count out of range", line_no);
                if (count == 0) throw ParseError("count must be positive", line_no);
                if (pos == line.size() || !is_space(line[pos])) {
                    throw ParseError("expected whitespace after count", line_no);
                }
                while (pos < line.size() && is_space(line[pos])) ++pos;
                if (pos == line.size()) throw ParseError("missing password after count", line_no);
                entries.push_back({line.substr(pos), count});
                break;
            }
            case CorpusFormat::ranked:
                ranked.push_back(line);
                break;
        }
    }

    if (format == CorpusFormat::ranked) {
        const std::uint64_t n = ranked.size();
        entries.reserve(ranked.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            entries.push_back({std::move(ranked[i]), n - i});
        }
    }
    if (entries.empty()) throw EmptyInputError("corpus contains no passwords");
    return PasswordCorpus::from_counts(std::move(entries));
}

PasswordCorpus load_corpus_file(const std::string& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open corpus file '" + path + "'");
    return load_corpus(in, format);
}

PasswordCorpus top_n(const PasswordCorpus& corpus, std::size_t n) {
    const auto& all = corpus.entries();
    const std::size_t keep = std::min(n, all.size());
    return PasswordCorpus::from_counts({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep)});
}

}  // namespace mcrank
