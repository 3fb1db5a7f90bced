#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mcrank {

enum class CorpusFormat {
    plain,    // one password per line, repeated lines accumulate
    counted,  // "<count><whitespace><password>" per line
    ranked,   // one unique password per line, most frequent first; counts
              // are synthesized as line order (N, N-1, ..., 1)
};

CorpusFormat parse_corpus_format(std::string_view name);

struct CorpusEntry {
    std::string password;
    std::uint64_t count = 0;

    friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

// Frequency-ordered password list. Entries are unique and sorted by
// descending count, ties by ascending byte-wise password order.
class PasswordCorpus {
public:
    PasswordCorpus() = default;

    // Merges duplicate passwords and establishes the ordering invariant.
    static PasswordCorpus from_counts(std::vector<CorpusEntry> entries);

    const std::vector<CorpusEntry>& entries() const noexcept { return entries_; }
    std::uint64_t total_count() const noexcept { return total_count_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    friend bool operator==(const PasswordCorpus&, const PasswordCorpus&) = default;

private:
    std::vector<CorpusEntry> entries_;
    std::uint64_t total_count_ = 0;
};

// Throws ParseError (with 1-based line number) on malformed counted lines or
// invalid UTF-8, EmptyInputError when no password was read. A trailing CR is
// stripped so CRLF files load the same as LF files.
PasswordCorpus load_corpus(std::istream& source, CorpusFormat format);
PasswordCorpus load_corpus_file(const std::string& path, CorpusFormat format);

PasswordCorpus top_n(const PasswordCorpus& corpus, std::size_t n);

bool is_valid_utf8(std::string_view bytes) noexcept;

}  // namespace mcrank
