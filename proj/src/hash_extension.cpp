#include "risecure/hash_extension.hpp"

#include "risecure/error.hpp"

#include <cmath>

namespace risecure {

OutputMode output_mode_from_bits(unsigned e) {
    switch (e) {
        case 0b00: return OutputMode::raw;
        case 0b01: return OutputMode::corrected;
        case 0b10: return OutputMode::hashed;
        case 0b11: throw Error("output mode E=11 is reserved");
        default: throw Error("output mode selector is two bits wide");
    }
}

OutputMode parse_output_mode(std::string_view name) {
    if (name == "raw" || name == "00") return OutputMode::raw;
    if (name == "corrected" || name == "01") return OutputMode::corrected;
    if (name == "hashed" || name == "10") return OutputMode::hashed;
    if (name == "11") throw Error("output mode E=11 is reserved");
    throw Error("unknown output mode: " + std::string(name));
}

std::string_view to_string(OutputMode mode) noexcept {
    switch (mode) {
        case OutputMode::raw: return "raw";
        case OutputMode::corrected: return "corrected";
        case OutputMode::hashed: return "hashed";
    }
    return "?";
}

FinalResponse compose_response(const StableResponse& r2, const OuterChallenge& c, std::size_t n_code,
                               HashAlgorithm alg) {
    if (r2.bits.size() != n_code) {
        throw Error("compose_response: R2 must be exactly " + std::to_string(n_code) + " bits, got " +
                    std::to_string(r2.bits.size()));
    }
    if (c.bits.size() != kOuterChallengeBits) {
        throw Error("compose_response: outer challenge must be exactly " + std::to_string(kOuterChallengeBits) +
                    " bits, got " + std::to_string(c.bits.size()));
    }
    const auto message = r2.bits.concat(c.bits).to_bytes();
    return FinalResponse{hash(alg, message)};
}

std::string to_hex(const ModeOutput& out) {
    if (const auto* r1 = std::get_if<RawResponse>(&out)) return r1->bits.to_hex();
    if (const auto* r2 = std::get_if<StableResponse>(&out)) return r2->bits.to_hex();
    return std::get<FinalResponse>(out).hex();
}

ModeOutput select_output(const PufInstance& puf, const CodeSpec& code, const OutputRequest& req) {
    if (req.mode == OutputMode::raw) return puf.eval_raw(req.c0, req.noise_seed);
    if (!req.helper) throw Error("output mode " + std::string(to_string(req.mode)) + " requires helper data");
    if (req.mode == OutputMode::hashed && !req.outer) throw Error("output mode hashed requires an outer challenge");

    auto r2 = reconstruct(puf, req.c0, *req.helper, code, req.noise_seed);
    if (!r2) throw ReconstructFailure();
    if (req.mode == OutputMode::corrected) return *std::move(r2);
    return compose_response(*r2, *req.outer, code.n_bits(), req.hash);
}

bool UnpredictabilityReport::monobit_pass() const noexcept { return std::abs(monobit_z) <= threshold; }
bool UnpredictabilityReport::bias_pass() const noexcept { return max_bias_z <= threshold; }
bool UnpredictabilityReport::serial_pass() const noexcept { return std::abs(serial_z) <= threshold; }

double monobit_z(std::span<const std::uint8_t> bits) {
    if (bits.empty()) throw Error("monobit_z: empty stream");
    double ones = 0;
    for (auto b : bits) ones += b ? 1.0 : 0.0;
    const double n = static_cast<double>(bits.size());
    return (ones - n / 2.0) / std::sqrt(n / 4.0);
}

UnpredictabilityReport unpredictability_report(std::span<const FinalResponse> samples) {
    if (samples.size() < 1000) throw Error("unpredictability_report: need at least 1000 samples");
    constexpr std::size_t width = 8 * sizeof(Digest);
    UnpredictabilityReport rep;
    rep.samples = samples.size();
    rep.bits = samples.size() * width;

    std::vector<std::uint8_t> stream;
    stream.reserve(rep.bits);
    std::vector<double> ones_per_bit(width, 0.0);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < width; ++i) {
            const auto b = static_cast<std::uint8_t>((s.digest[i / 8] >> (7 - i % 8)) & 1U);
            stream.push_back(b);
            ones_per_bit[i] += b;
        }
    }
    rep.monobit_z = monobit_z(stream);

    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < width; ++i) {
        const double z = std::abs(ones_per_bit[i] - n / 2.0) / std::sqrt(n / 4.0);
        if (z > rep.max_bias_z) {
            rep.max_bias_z = z;
            rep.worst_bit = i;
        }
    }

    double equal_pairs = 0;
    for (std::size_t i = 1; i < stream.size(); ++i) equal_pairs += (stream[i] == stream[i - 1]);
    const double pairs = static_cast<double>(stream.size() - 1);
    rep.serial_z = (equal_pairs - pairs / 2.0) / std::sqrt(pairs / 4.0);
    return rep;
}

}  // namespace risecure
