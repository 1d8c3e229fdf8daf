#pragma once

#include "risecure/bits.hpp"
#include "risecure/rng.hpp"

#include <cstdint>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace risecure {

/// Width of the inner challenge C0 accepted by eval_raw.
inline constexpr std::size_t kInnerChallengeBits = 64;

struct Challenge {
    Bits bits;

    static Challenge from_u64(std::uint64_t value, std::size_t width = kInnerChallengeBits) {
        return {Bits::from_u64(value, width)};
    }
    std::size_t width() const noexcept { return bits.size(); }
    friend bool operator==(const Challenge&, const Challenge&) = default;
};

/// Noisy (or reference) response R1 of n_code bits.
struct RawResponse {
    Bits bits;
    friend bool operator==(const RawResponse&, const RawResponse&) = default;
};

enum class PufKind { sram, arbiter, xor_arbiter };

std::string_view to_string(PufKind kind) noexcept;
PufKind parse_puf_kind(std::string_view name);

struct SramParams {
    std::uint64_t num_blocks = 256;
    std::size_t block_bits = 127;
    double flip_prob = 0.05;
};

struct ArbiterParams {
    std::size_t stages = 64;
    double noise_sigma = 0.0;
    std::size_t response_bits = 127;
};

struct XorArbiterParams {
    std::size_t chains = 4;
    std::size_t stages = 64;
    double noise_sigma = 0.0;
    std::size_t response_bits = 127;
};

using PufParams = std::variant<SramParams, ArbiterParams, XorArbiterParams>;

/// Parity transform of the additive delay model: phi_i is the product of
/// (1 - 2 c_j) for j = i..s, and phi_{s+1} = 1.
std::vector<double> parity_features(const Challenge& c, std::size_t stages);

/// Public expansion of an inner challenge into the i-th sub-challenge of an
/// arbiter-kind raw read: `stages` bits taken MSB first from
/// mix64(fold(c0) ^ mix64(i * 2^64/phi + word)).
Challenge expand_challenge(const Challenge& c0, std::size_t index, std::size_t stages);

/// One arbiter chain: weights ~ N(0, 1) of length stages + 1 drawn from seed.
class ArbiterChain {
public:
    ArbiterChain(std::uint64_t seed, std::size_t stages, double noise_sigma);

    std::size_t stages() const noexcept { return weights_.size() - 1; }
    double noise_sigma() const noexcept { return sigma_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double delay(std::span<const double> features) const noexcept;
    /// Consumes exactly one normal draw from `noise` regardless of sigma.
    bool eval(std::span<const double> features, Stream& noise) const noexcept;
    bool eval_noiseless(std::span<const double> features) const noexcept { return delay(features) > 0.0; }

private:
    std::vector<double> weights_;
    double sigma_;
};

/// Seeded, immutable PUF model. All evaluation is a pure function of the
/// instance, the challenge and the caller-supplied noise seed.
class PufInstance {
public:
    static PufInstance create(std::uint64_t seed, PufParams params);

    PufKind kind() const noexcept;
    std::uint64_t seed() const noexcept { return seed_; }
    const PufParams& params() const noexcept { return params_; }

    /// n_code: bit length of R1.
    std::size_t response_bits() const noexcept;
    /// Stage count for single-bit evaluation (arbiter kinds only).
    std::size_t stages() const;
    double noise_sigma() const;
    const std::vector<ArbiterChain>& chains() const noexcept { return chains_; }

    RawResponse eval_raw(const Challenge& c0, std::uint64_t noise_seed) const;
    RawResponse reference_response(const Challenge& c0) const;

    /// Single response bit of a strong PUF for a stage-width challenge; XOR
    /// variants XOR the chain bits.
    bool eval_bit(const Challenge& c, std::uint64_t noise_seed) const;
    bool reference_bit(const Challenge& c) const;

    /// Same silicon (seed and weights), different evaluation noise.
    PufInstance with_noise_sigma(double sigma) const;

    /// Reference bit of one SRAM cell; exposed for tests.
    static std::uint8_t sram_cell(std::uint64_t seed, std::uint64_t block, std::size_t bit) noexcept;

private:
    PufInstance(std::uint64_t seed, PufParams params);

    std::uint64_t block_index(const Challenge& c0) const;
    bool eval_chains(std::span<const double> features, Stream* noise) const;

    std::uint64_t seed_;
    PufParams params_;
    std::vector<ArbiterChain> chains_;
};

/// Validates that `params` belongs to `kind` and constructs the instance.
PufInstance new_puf(PufKind kind, std::uint64_t seed, PufParams params);

/// Fraction of response bits over `trials` noisy reads that match the
/// reference response. Challenges and noise seeds are derived from `seed`.
double measure_reliability(const PufInstance& puf, std::size_t trials, std::uint64_t seed);

/// Bisection over the arbiter noise sigma until measure_reliability (same
/// trials and seed) matches `target` within 0.2 percentage points. The
/// template's own sigma is ignored.
double calibrate_sigma(const PufInstance& puf, double target_reliability, std::size_t trials, std::uint64_t seed);

}  // namespace risecure
