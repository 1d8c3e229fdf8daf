#pragma once

#include "risecure/fuzzy_extractor.hpp"
#include "risecure/hash.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace risecure {

/// Width of the outer challenge C. Fixed per deployment; every call checks it.
inline constexpr std::size_t kOuterChallengeBits = 128;

struct OuterChallenge {
    Bits bits;
    friend bool operator==(const OuterChallenge&, const OuterChallenge&) = default;
};

/// R3 = H(R2 || C).
struct FinalResponse {
    Digest digest{};
    std::string hex() const { return to_hex(digest); }
    friend bool operator==(const FinalResponse&, const FinalResponse&) = default;
};

/// Output selector E[1:0]. 0b11 is reserved.
enum class OutputMode : std::uint8_t { raw = 0b00, corrected = 0b01, hashed = 0b10 };

OutputMode output_mode_from_bits(unsigned e);
OutputMode parse_output_mode(std::string_view name);
std::string_view to_string(OutputMode mode) noexcept;

/// Hashes the bit string R2 || C, packed MSB first with the final byte
/// zero-padded. Rejects any R2 that is not exactly `n_code` bits and any C
/// that is not exactly kOuterChallengeBits.
FinalResponse compose_response(const StableResponse& r2, const OuterChallenge& c, std::size_t n_code,
                               HashAlgorithm alg = HashAlgorithm::sha3_256);

using ModeOutput = std::variant<RawResponse, StableResponse, FinalResponse>;

/// Hex rendering of whichever stage output the mux produced.
std::string to_hex(const ModeOutput& out);

struct OutputRequest {
    OutputMode mode = OutputMode::hashed;
    Challenge c0;
    std::uint64_t noise_seed = 0;
    std::optional<HelperData> helper;
    std::optional<OuterChallenge> outer;
    HashAlgorithm hash = HashAlgorithm::sha3_256;
};

/// Output mux: E=00 returns R1, E=01 returns R2 (needs helper), E=10 returns
/// R3 (needs helper and C). Throws ReconstructFailure when decoding fails.
ModeOutput select_output(const PufInstance& puf, const CodeSpec& code, const OutputRequest& request);

struct UnpredictabilityReport {
    std::size_t samples = 0;
    std::size_t bits = 0;
    double monobit_z = 0.0;
    double max_bias_z = 0.0;
    std::size_t worst_bit = 0;
    double serial_z = 0.0;
    double threshold = 4.0;

    bool monobit_pass() const noexcept;
    bool bias_pass() const noexcept;
    bool serial_pass() const noexcept;
    bool pass() const noexcept { return monobit_pass() && bias_pass() && serial_pass(); }
};

/// Monobit frequency, per-bit-position bias and lag-1 serial correlation of a
/// digest stream, each as a z-score checked against 4 sigma. Needs >= 1000 samples.
UnpredictabilityReport unpredictability_report(std::span<const FinalResponse> samples);

/// Monobit z-score of a plain 0/1 stream.
double monobit_z(std::span<const std::uint8_t> bits);

}  // namespace risecure
