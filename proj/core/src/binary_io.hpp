#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcrank/error.hpp"

namespace mcrank::detail {

// Little-endian primitive writer over an ostream.
class ByteWriter {
public:
    explicit ByteWriter(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { put(&v, 1); }
    void u16(std::uint16_t v) { le(v); }
    void u32(std::uint32_t v) { le(v); }
    void u64(std::uint64_t v) { le(v); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        le(bits);
    }
    void bytes(std::string_view s) { put(s.data(), s.size()); }

private:
    template <class T>
    void le(T v) {
        std::array<unsigned char, sizeof(T)> buf;
        for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
        put(buf.data(), buf.size());
    }
    void put(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }

    std::ostream& out_;
};

// Bounds-checked little-endian reader over an in-memory buffer. Every read
// past the end throws FormatError.
class ByteReader {
public:
    explicit ByteReader(std::span<const unsigned char> data) : data_(data) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le<std::uint8_t>()); }
    std::uint16_t u16() { return le<std::uint16_t>(); }
    std::uint32_t u32() { return le<std::uint32_t>(); }
    std::uint64_t u64() { return le<std::uint64_t>(); }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
        pos_ += n;
        return s;
    }

    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    bool done() const noexcept { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) throw FormatError("unexpected end of data");
    }
    template <class T>
    T le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(data_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return v;
    }

    std::span<const unsigned char> data_;
    std::size_t pos_ = 0;
};

// Reads exactly n bytes from the stream or throws FormatError.
std::vector<unsigned char> read_exact(std::istream& in, std::size_t n);

// FNV-1a over raw bytes.
std::uint64_t fnv1a(std::span<const unsigned char> data, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

inline constexpr std::array<char, 8> kModelMagic = {'M', 'C', 'R', 'K', 'M', 'O', 'D', 'L'};
inline constexpr std::array<char, 8> kTableMagic = {'M', 'C', 'R', 'K', 'T', 'B', 'L', '1'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kModelHeaderSize = 40;
inline constexpr std::size_t kTableHeaderSize = 40;

struct ModelHeader {
    std::uint8_t kind = 0;
    std::uint8_t flags = 0;
    std::uint64_t param_a = 0;
    std::uint64_t param_b = 0;
    std::uint64_t payload_length = 0;
};

void write_model_header(ByteWriter& w, const ModelHeader& h);
ModelHeader read_model_header(std::istream& in);

}  // namespace mcrank::detail
