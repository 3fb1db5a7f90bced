#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <string_view>

namespace mcrank {

using Rng = std::mt19937_64;

inline constexpr double kInfiniteNeglog = std::numeric_limits<double>::infinity();

// Bytes that never occur in valid UTF-8; used internally as sequence markers.
inline constexpr unsigned char kStartSymbol = 0xFF;
inline constexpr unsigned char kEndSymbol = 0xFE;

enum class ModelKind : std::uint8_t {
    ngram = 1,
    backoff = 2,
    pcfg = 3,
};

std::string_view to_string(ModelKind kind) noexcept;

struct ScoredPassword {
    std::string password;
    double neglog = 0.0;  // -log2 p(password)
};

// Receives enumerated passwords; return false to stop the enumeration.
using EnumerationSink = std::function<bool(std::string_view password, double neglog)>;

// A trained generative password model. Trained models are immutable; every
// const member is safe to call concurrently (sampling needs one Rng per
// caller).
class PasswordModel {
public:
    virtual ~PasswordModel() = default;

    virtual ModelKind kind() const noexcept = 0;

    // -log2 p(password); +infinity when the model cannot produce it.
    virtual double neg_log2_prob(std::string_view password) const = 0;

    // Ancestral sample. The returned neglog is bit-identical to
    // neg_log2_prob(result.password).
    virtual ScoredPassword sample(Rng& rng) const = 0;

    // Best-first enumeration of every password with neglog <= threshold, in
    // ascending neglog order, equal neglogs in ascending byte order.
    virtual void enumerate(double threshold, const EnumerationSink& sink) const = 0;

    // Writes the binary model container (header plus count tables).
    virtual void save(std::ostream& out) const = 0;

    // Size in bytes of what save() writes.
    std::uint64_t size_bytes() const;

    // Human readable parameter summary, e.g. "4-gram".
    virtual std::string describe() const = 0;
};

std::unique_ptr<PasswordModel> load_model(std::istream& in);
std::unique_ptr<PasswordModel> load_model_file(const std::string& path);
void save_model_file(const PasswordModel& model, const std::string& path);

}  // namespace mcrank
