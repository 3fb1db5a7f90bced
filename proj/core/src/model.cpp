#include "mcrank/model.hpp"

#include <fstream>
#include <streambuf>

#include "binary_io.hpp"
#include "mcrank/backoff.hpp"
#include "mcrank/error.hpp"
#include "mcrank/ngram.hpp"
#include "mcrank/pcfg.hpp"

namespace mcrank {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::ngram:
            return "ngram";
        case ModelKind::backoff:
            return "backoff";
        case ModelKind::pcfg:
            return "pcfg";
    }
    return "unknown";
}

namespace {

class CountingBuf : public std::streambuf {
public:
    std::uint64_t count() const noexcept { return count_; }

protected:
    int_type overflow(int_type ch) override {
        if (!traits_type::eq_int_type(ch, traits_type::eof())) ++count_;
        return traits_type::not_eof(ch);
    }
    std::streamsize xsputn(const char*, std::streamsize n) override {
        count_ += static_cast<std::uint64_t>(n);
        return n;
    }

private:
    std::uint64_t count_ = 0;
};

}  // namespace

std::uint64_t PasswordModel::size_bytes() const {
    CountingBuf buf;
    std::ostream out(&buf);
    save(out);
    return buf.count();
}

std::unique_ptr<PasswordModel> load_model(std::istream& in) {
    const auto header = detail::read_model_header(in);
    const auto payload = detail::read_exact(in, header.payload_length);
    detail::ByteReader r(payload);
    std::unique_ptr<PasswordModel> model;
    switch (static_cast<ModelKind>(header.kind)) {
        case ModelKind::ngram:
            model = NGramModel::read_payload(header, r);
            break;
        case ModelKind::backoff:
            model = BackoffModel::read_payload(header, r);
            break;
        case ModelKind::pcfg:
            model = PcfgModel::read_payload(header, r);
            break;
        default:
            throw FormatError("unknown model type tag " + std::to_string(header.kind));
    }
    if (!r.done()) throw FormatError("trailing bytes in model payload");
    return model;
}

std::unique_ptr<PasswordModel> load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    auto model = load_model(in);
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after model in '" + path + "'");
    return model;
}

void save_model_file(const PasswordModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write model file '" + path + "'");
    model.save(out);
    if (!out) throw InputError("error while writing model file '" + path + "'");
}

}  // namespace mcrank
