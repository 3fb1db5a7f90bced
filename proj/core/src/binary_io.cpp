#include "binary_io.hpp"

#include <istream>

namespace mcrank::detail {

std::vector<unsigned char> read_exact(std::istream& in, std::size_t n) {
    std::vector<unsigned char> buf(n);
    if (n > 0) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n) throw FormatError("truncated input");
    }
    return buf;
}

std::uint64_t fnv1a(std::span<const unsigned char> data, std::uint64_t seed) noexcept {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_model_header(ByteWriter& w, const ModelHeader& h) {
    w.bytes({kModelMagic.data(), kModelMagic.size()});
    w.u32(kFormatVersion);
    w.u8(h.kind);
    w.u8(h.flags);
    w.u16(0);
    w.u64(h.param_a);
    w.u64(h.param_b);
    w.u64(h.payload_length);
}

ModelHeader read_model_header(std::istream& in) {
    const auto raw = read_exact(in, kModelHeaderSize);
    ByteReader r(raw);
    const std::string magic = r.bytes(kModelMagic.size());
    if (magic != std::string_view(kModelMagic.data(), kModelMagic.size())) {
        throw FormatError("not a model file (bad magic)");
    }
    if (const auto version = r.u32(); version != kFormatVersion) {
        throw FormatError("unsupported model format version " + std::to_string(version));
    }
    ModelHeader h;
    h.kind = r.u8();
    h.flags = r.u8();
    r.u16();
    h.param_a = r.u64();
    h.param_b = r.u64();
    h.payload_length = r.u64();
    return h;
}

}  // namespace mcrank::detail
