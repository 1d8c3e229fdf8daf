#pragma once

#include "risecure/lookaside_buffer.hpp"

#include <map>
#include <optional>
#include <utility>

namespace risecure {

/// Status written to rd by the custom instructions.
enum class PufStatus : std::uint32_t {
    ok = 0,
    unknown_index = 1,
    memory_fault = 2,
    width_mismatch = 3,
    reconstruct_failure = 4,
    invalid_challenge = 5,
};

struct AuxRecord {
    Challenge c0;
    HelperData helper;
};

/// The PUF peripheral behind inner_puf_init / outer_puf_chal: indexed PUFs,
/// the aux table filled by successful initialisations, and the lookaside
/// buffer. Enrollment and challenge noise seeds are derived from the device
/// seed and per-operation sequence numbers, so a run is reproducible.
class PufDevice {
public:
    explicit PufDevice(CodeSpec code = CodeSpec::default_bch(), std::size_t buffer_capacity = 16,
                       std::uint64_t seed = 0, HashAlgorithm hash = HashAlgorithm::sha3_256);

    void attach(std::uint32_t idx, PufInstance puf);
    const PufInstance* puf(std::uint32_t idx) const;
    const AuxRecord* aux(std::uint32_t idx) const;
    const std::map<std::uint32_t, AuxRecord>& aux_table() const noexcept { return aux_table_; }
    const std::map<std::uint32_t, PufInstance>& pufs() const noexcept { return pufs_; }

    PufStatus inner_puf_init(std::uint32_t idx, const Challenge& c0);
    std::pair<PufStatus, std::optional<FinalResponse>> outer_puf_chal(std::uint32_t idx, const OuterChallenge& c);

    /// rng seed used by the init with sequence number `seq` (0-based count of
    /// init attempts that reached enrollment).
    std::uint64_t init_seed(std::uint32_t idx, std::uint64_t seq) const noexcept;
    std::uint64_t chal_noise_seed(std::uint64_t seq) const noexcept;
    std::uint64_t init_count() const noexcept { return init_count_; }
    std::uint64_t chal_count() const noexcept { return chal_count_; }

    const CodeSpec& code() const noexcept { return code_; }
    HashAlgorithm hash() const noexcept { return hash_; }
    std::uint64_t seed() const noexcept { return seed_; }
    LookasideBuffer& buffer() noexcept { return buffer_; }
    const LookasideBuffer& buffer() const noexcept { return buffer_; }

private:
    CodeSpec code_;
    LookasideBuffer buffer_;
    std::uint64_t seed_;
    HashAlgorithm hash_;
    std::map<std::uint32_t, PufInstance> pufs_;
    std::map<std::uint32_t, AuxRecord> aux_table_;
    std::uint64_t init_count_ = 0;
    std::uint64_t chal_count_ = 0;
};

}  // namespace risecure
