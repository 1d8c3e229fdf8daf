#pragma once

#include "risecure/code_spec.hpp"
#include "risecure/puf.hpp"

#include <optional>
#include <string>

namespace risecure {

/// Public helper string aux = Encode(r) xor R1, parallel to the raw response.
struct HelperData {
    std::string code_id;
    Bits aux;
    friend bool operator==(const HelperData&, const HelperData&) = default;
};

/// Error-corrected response R2: the stabilized enrollment-time R1.
struct StableResponse {
    Bits bits;
    friend bool operator==(const StableResponse&, const StableResponse&) = default;
};

struct Enrollment {
    HelperData helper;
    StableResponse response;
};

/// The k-bit enrollment secret r drawn for a given seed.
Bits enrollment_secret(const CodeSpec& code, std::uint64_t rng_seed);
/// Enrollment reads the PUF this many times and keeps the bitwise majority.
/// Reconstruction then only has to absorb the noise of a single fresh read.
inline constexpr std::size_t kEnrollmentReads = 11;

/// Noise seed of the `read`-th PUF read taken during enroll().
std::uint64_t enrollment_read_seed(std::uint64_t rng_seed, std::size_t read) noexcept;
/// Bitwise majority of `reads` noisy reads (odd, >= 1).
RawResponse enrollment_read(const PufInstance& puf, const Challenge& c0, std::uint64_t rng_seed,
                            std::size_t reads = kEnrollmentReads);

/// Code-offset enrollment of an already-taken read R1.
Enrollment enroll_read(const RawResponse& r1, const CodeSpec& code, std::uint64_t rng_seed);
/// Takes the majority read of (puf, c0) and enrolls it.
Enrollment enroll(const PufInstance& puf, const Challenge& c0, const CodeSpec& code, std::uint64_t rng_seed,
                  std::size_t reads = kEnrollmentReads);

/// m' = Decode(aux xor R1'), R2 = Encode(m') xor aux. nullopt when decoding fails.
std::optional<StableResponse> recover(const RawResponse& r1_prime, const HelperData& helper, const CodeSpec& code);
/// Fresh noisy read followed by recover().
std::optional<StableResponse> reconstruct(const PufInstance& puf, const Challenge& c0, const HelperData& helper,
                                          const CodeSpec& code, std::uint64_t noise_seed);

}  // namespace risecure
