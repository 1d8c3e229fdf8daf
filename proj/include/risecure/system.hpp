#pragma once

#include "risecure/device.hpp"

namespace risecure {

inline constexpr int kSchemaVersion = 1;

/// Everything needed to rebuild a PUF system: the PUF model, the ECC, the
/// lookaside capacity, the hash and the global seed.
struct SystemConfig {
    PufInstance puf = PufInstance::create(0, SramParams{});
    CodeSpec code = CodeSpec::default_bch();
    std::size_t buffer_capacity = 16;
    HashAlgorithm hash = HashAlgorithm::sha3_256;
    std::uint64_t seed = 0;

    /// Throws when the PUF response width does not match the code length.
    void validate() const;
};

/// Flip probability used for SRAM PUFs when none is given: 0.05 for BCH,
/// and 0.002 for RS, whose symbol-level budget cannot absorb 5% bit noise.
double default_flip_prob(const CodeSpec& code) noexcept;

/// Default-parameter PUF of `kind` sized to `code`.
PufInstance default_puf(PufKind kind, std::uint64_t seed, const CodeSpec& code);

}  // namespace risecure
